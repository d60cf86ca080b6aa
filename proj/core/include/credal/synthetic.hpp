#pragma once

// Synthetic ambiguous-ground-truth data: a 2-D Gaussian mixture whose exact
// posterior is the plausibility vector, and a tempered copy of it standing in
// for a trained classifier.

#include <array>
#include <cstdint>
#include <vector>

#include "credal/conformal.hpp"

namespace credal {

struct MixtureComponent {
  std::array<double, 2> mean{};
  /// Row-major 2x2 covariance; must be symmetric positive definite.
  std::array<double, 4> covariance{1.0, 0.0, 0.0, 1.0};
  double prior = 0.0;
};

struct GeneratorSpec {
  std::vector<MixtureComponent> components;
  /// Model logits are the log-posterior divided by this; 1 means the model
  /// equals the posterior exactly.
  double temperature = 1.5;

  /// K components with means evenly spaced on a circle of radius
  /// `spread`, unit covariance and equal priors.
  static GeneratorSpec balanced(std::size_t k = 3, double spread = 1.2,
                                double temperature = 1.5);

  std::size_t label_count() const noexcept { return components.size(); }
};

/// Throws InvalidSpec on a bad covariance, priors not summing to 1, fewer
/// than two components, or a non-positive temperature.
void validate(const GeneratorSpec& spec);

struct SyntheticDataset {
  std::vector<CalibrationRecord> records;
  std::vector<std::array<double, 2>> features;
  /// Component each point was drawn from (its realized label).
  std::vector<std::size_t> components;
  GeneratorSpec spec;
  std::uint64_t seed = 0;
};

SyntheticDataset generate_synthetic(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace credal
