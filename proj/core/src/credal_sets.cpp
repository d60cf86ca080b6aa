#include "credal/credal_sets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "credal/error.hpp"

namespace credal {

namespace {

void check_delta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "delta must lie in [0, 1]");
  }
}

void check_cap(std::size_t k_count, std::size_t k_cap) {
  if (k_count > k_cap || k_count >= kMaxLabels) {
    throw Error(ErrorCode::LabelSpaceTooLarge,
                "subset enumeration over " + std::to_string(k_count) +
                    " labels exceeds the cap of " + std::to_string(k_cap));
  }
}

void check_envelope_shape(const ProbabilityEnvelope& env) {
  if (env.lower.size() != env.upper.size() || env.lower.size() < 2) {
    throw Error(ErrorCode::DimensionMismatch, "envelope bounds have inconsistent sizes");
  }
}

double eq3(const ProbabilityEnvelope& env, LabelSet::Mask mask) {
  double in_lower = 0.0;
  double out_upper = 0.0;
  for (std::size_t k = 0; k < env.size(); ++k) {
    if ((mask >> k) & 1U) {
      in_lower += env.lower[k];
    } else {
      out_upper += env.upper[k];
    }
  }
  return std::clamp(std::max(in_lower, 1.0 - out_upper), 0.0, 1.0);
}

// Quantized sort key: a transitive stand-in for "equal lower probability".
long long tie_key(double p) { return std::llround(p / kProbabilityTol); }

bool reaches(double lower, double delta) { return lower >= (1.0 - delta) - kProbabilityTol; }

}  // namespace

void check_sure_loss(const ProbabilityEnvelope& env) {
  check_envelope_shape(env);
  const double lo = std::accumulate(env.lower.begin(), env.lower.end(), 0.0);
  const double hi = std::accumulate(env.upper.begin(), env.upper.end(), 0.0);
  if (lo > 1.0 + kSureLossTol || hi < 1.0 - kSureLossTol) {
    throw Error(ErrorCode::SureLossViolation,
                "envelope incurs sure loss: sum(lower) = " + std::to_string(lo) +
                    ", sum(upper) = " + std::to_string(hi));
  }
}

double lower_probability(const ProbabilityEnvelope& env, LabelSet a) {
  check_sure_loss(env);
  if (!a.is_subset_of(LabelSet::full(env.size()))) {
    throw Error(ErrorCode::DimensionMismatch, "label set has labels outside the envelope");
  }
  return eq3(env, a.mask());
}

double upper_probability(const ProbabilityEnvelope& env, LabelSet a) {
  return 1.0 - lower_probability(env, a.complement(env.size()));
}

double exact_lower_probability(const CredalRegion& region, LabelSet a) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : extreme_points(region).vertices) {
    double mass = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (a.contains(k)) mass += v[k];
    }
    best = std::min(best, mass);
  }
  return std::clamp(best, 0.0, 1.0);
}

LowerProbabilityTable::LowerProbabilityTable(const ProbabilityEnvelope& env, std::size_t k_cap)
    : k_count_(env.size()) {
  check_sure_loss(env);
  check_cap(k_count_, k_cap);
  const std::size_t n_subsets = std::size_t{1} << k_count_;
  // Subset sums built by dropping the highest bit, so each sum accumulates
  // in ascending label order exactly like eq3().
  std::vector<double> in_lower(n_subsets, 0.0);
  std::vector<double> in_upper(n_subsets, 0.0);
  for (std::size_t mask = 1; mask < n_subsets; ++mask) {
    const auto high = static_cast<std::size_t>(std::bit_width(mask)) - 1;
    const std::size_t rest = mask ^ (std::size_t{1} << high);
    in_lower[mask] = in_lower[rest] + env.lower[high];
    in_upper[mask] = in_upper[rest] + env.upper[high];
  }
  values_.resize(n_subsets);
  const std::size_t full = n_subsets - 1;
  for (std::size_t mask = 0; mask < n_subsets; ++mask) {
    values_[mask] = std::clamp(std::max(in_lower[mask], 1.0 - in_upper[full ^ mask]), 0.0, 1.0);
  }
}

std::string_view to_string(SetMethod method) {
  switch (method) {
    case SetMethod::IhdsAlgorithm1: return "IHDS_ALG1";
    case SetMethod::IhdsMinCardinality: return "IHDS_MIN_ORACLE";
    case SetMethod::Prps: return "PRPS";
  }
  return "UNKNOWN";
}

PredictionSetResult ihds_algorithm1(const ProbabilityEnvelope& env, double delta,
                                    std::size_t k_cap) {
  check_delta(delta);
  const LowerProbabilityTable table(env, k_cap);
  const auto& values = table.values();

  // The first qualifying set in the sorted order is the qualifying set with
  // the smallest (lower probability, cardinality, mask) key.
  bool found = false;
  LabelSet::Mask best = 0;
  long long best_key = 0;
  int best_size = 0;
  for (LabelSet::Mask mask = 0; mask < values.size(); ++mask) {
    if (!reaches(values[mask], delta)) continue;
    const long long key = tie_key(values[mask]);
    const int size = std::popcount(mask);
    if (!found || key < best_key || (key == best_key && size < best_size)) {
      found = true;
      best = mask;
      best_key = key;
      best_size = size;
    }
  }
  if (found) return {LabelSet(best), values[best], SetMethod::IhdsAlgorithm1, delta};
  const LabelSet all = LabelSet::full(table.label_count());
  return {all, 1.0, SetMethod::IhdsAlgorithm1, delta};
}

PredictionSetResult ihds_min_cardinality(const ProbabilityEnvelope& env, double delta,
                                         std::size_t k_cap) {
  check_delta(delta);
  const LowerProbabilityTable table(env, k_cap);
  const auto& values = table.values();
  const std::size_t k_count = table.label_count();

  // Scan by cardinality, masks ascending within each size.
  for (std::size_t size = 0; size <= k_count; ++size) {
    for (LabelSet::Mask mask = 0; mask < values.size(); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
      if (reaches(values[mask], delta)) {
        return {LabelSet(mask), values[mask], SetMethod::IhdsMinCardinality, delta};
      }
    }
  }
  return {LabelSet::full(k_count), 1.0, SetMethod::IhdsMinCardinality, delta};
}

PredictionSetResult prps(const CredalRegion& region, double delta, std::size_t resolution) {
  check_delta(delta);
  const std::size_t k_count = region.size();
  const LabelSet all = LabelSet::full(k_count);
  LabelSet united;

  for (const auto& v : extreme_points(region).vertices) {
    united = united | highest_density_set(v, delta);
  }
  if (united != all) {
    for_each_lattice_member(region, resolution, [&](std::span<const double> point) {
      united = united | highest_density_set(point, delta);
      return united != all;
    });
  }

  const auto env = envelope(region);
  return {united, lower_probability(env, united), SetMethod::Prps, delta};
}

}  // namespace credal
