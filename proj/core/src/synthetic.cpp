#include "credal/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "credal/error.hpp"
#include "credal/random.hpp"

namespace credal {

GeneratorSpec GeneratorSpec::balanced(std::size_t k, double spread, double temperature) {
  GeneratorSpec spec;
  spec.temperature = temperature;
  for (std::size_t i = 0; i < k; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(k);
    MixtureComponent c;
    c.mean = {spread * std::cos(angle), spread * std::sin(angle)};
    c.prior = 1.0 / static_cast<double>(k);
    spec.components.push_back(c);
  }
  return spec;
}

void validate(const GeneratorSpec& spec) {
  if (spec.components.size() < 2) {
    throw Error(ErrorCode::InvalidSpec, "need at least two mixture components");
  }
  if (spec.components.size() > kMaxLabels) {
    throw Error(ErrorCode::InvalidSpec, "too many mixture components");
  }
  if (!(spec.temperature > 0.0) || !std::isfinite(spec.temperature)) {
    throw Error(ErrorCode::InvalidSpec, "temperature must be positive");
  }
  double prior_sum = 0.0;
  for (const auto& c : spec.components) {
    const auto& s = c.covariance;
    const double det = s[0] * s[3] - s[1] * s[2];
    if (!(s[0] > 0.0) || !(det > 0.0) || s[1] != s[2]) {
      throw Error(ErrorCode::InvalidSpec, "covariance must be symmetric positive definite");
    }
    if (!(c.prior >= 0.0)) throw Error(ErrorCode::InvalidSpec, "priors must be non-negative");
    prior_sum += c.prior;
  }
  if (std::abs(prior_sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidSpec, "priors must sum to 1");
  }
}

namespace {

std::vector<double> softmax(const std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - top);
    total += out[k];
  }
  for (double& v : out) v /= total;
  return out;
}

double log_gaussian(const std::array<double, 2>& x, const MixtureComponent& c) {
  const auto& s = c.covariance;
  const double det = s[0] * s[3] - s[1] * s[2];
  const double dx = x[0] - c.mean[0];
  const double dy = x[1] - c.mean[1];
  // inverse of [[a, b], [b, d]] is [[d, -b], [-b, a]] / det
  const double quad = (s[3] * dx * dx - 2.0 * s[1] * dx * dy + s[0] * dy * dy) / det;
  return -0.5 * quad - 0.5 * std::log(det) - std::log(2.0 * std::numbers::pi);
}

}  // namespace

SyntheticDataset generate_synthetic(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed) {
  validate(spec);
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  const std::size_t k_count = spec.label_count();

  std::vector<double> priors;
  for (const auto& c : spec.components) priors.push_back(c.prior);

  SyntheticDataset out;
  out.spec = spec;
  out.seed = seed;
  out.records.reserve(n);
  out.features.reserve(n);
  out.components.reserve(n);

  Rng rng(mix_seed(seed, 0));
  std::vector<double> log_joint(k_count);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t comp = rng.categorical(priors);
    const auto& c = spec.components[comp];
    // Cholesky factor of the 2x2 covariance.
    const double l00 = std::sqrt(c.covariance[0]);
    const double l10 = c.covariance[2] / l00;
    const double l11 = std::sqrt(c.covariance[3] - l10 * l10);
    const double z0 = rng.normal();
    const double z1 = rng.normal();
    const std::array<double, 2> x{c.mean[0] + l00 * z0, c.mean[1] + l10 * z0 + l11 * z1};

    for (std::size_t k = 0; k < k_count; ++k) {
      const double p = spec.components[k].prior;
      log_joint[k] = p > 0.0 ? std::log(p) + log_gaussian(x, spec.components[k])
                             : -std::numeric_limits<double>::infinity();
    }
    auto posterior = softmax(log_joint);
    std::vector<double> model = posterior;
    if (spec.temperature != 1.0) {
      std::vector<double> logits(k_count);
      for (std::size_t k = 0; k < k_count; ++k) {
        logits[k] = posterior[k] > 0.0 ? std::log(posterior[k]) / spec.temperature
                                       : -std::numeric_limits<double>::infinity();
      }
      model = softmax(logits);
    }
    out.records.push_back({"syn-" + std::to_string(i), ProbabilityVector::from(std::move(model)),
                           ProbabilityVector::from(std::move(posterior))});
    out.features.push_back(x);
    out.components.push_back(comp);
  }
  return out;
}

}  // namespace credal
