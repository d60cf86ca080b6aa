#pragma once

// Seeded generators for property tests.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "credal/credal_region.hpp"
#include "credal/credal_sets.hpp"

namespace gen {

struct RegionCase {
  std::vector<double> e;
  double tau = 0.0;
};

/// Random conformity vector on the simplex (flat Dirichlet) and a threshold
/// drawn between min E and max E; occasionally vacuous or at a tie.
inline RegionCase random_region(std::mt19937_64& rng, std::size_t k) {
  std::exponential_distribution<double> ex(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RegionCase c;
  c.e.resize(k);
  double s = 0.0;
  for (double& x : c.e) {
    x = ex(rng);
    s += x;
  }
  for (double& x : c.e) x /= s;
  const double lo = *std::min_element(c.e.begin(), c.e.end());
  const double hi = *std::max_element(c.e.begin(), c.e.end());
  const double r = u(rng);
  if (r < 0.05) {
    c.tau = -std::numeric_limits<double>::infinity();
  } else if (r < 0.1) {
    c.tau = c.e[rng() % k];
  } else {
    c.tau = lo + (hi - lo) * u(rng);
  }
  return c;
}

inline credal::CredalRegion make_region(const RegionCase& c) {
  return credal::CredalRegion(credal::ConformityScores{c.e}, c.tau);
}

/// Random envelope avoiding sure loss: lower bounds with sum <= 1 and upper
/// bounds >= lower with sum >= 1.
inline credal::ProbabilityEnvelope random_envelope(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  credal::ProbabilityEnvelope env;
  env.lower.resize(k);
  env.upper.resize(k);
  const double lower_budget = u(rng);
  double s = 0.0;
  for (double& x : env.lower) {
    x = u(rng);
    s += x;
  }
  for (double& x : env.lower) x *= lower_budget / s;
  double us = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    env.upper[j] = env.lower[j] + (1.0 - env.lower[j]) * u(rng);
    us += env.upper[j];
  }
  if (us < 1.0) {
    for (std::size_t j = 0; j < k; ++j) env.upper[j] = 1.0;
  }
  return env;
}

}  // namespace gen
