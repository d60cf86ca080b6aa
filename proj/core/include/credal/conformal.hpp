#pragma once

// Split-conformal calibration of plausibility scores.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "credal/label_simplex.hpp"

namespace credal {

/// Per-label conformity E(x, k); higher means more conformal.
struct ConformityScores {
  std::vector<double> per_label;

  std::size_t size() const noexcept { return per_label.size(); }
  double operator[](std::size_t k) const { return per_label[k]; }
  bool operator==(const ConformityScores&) const = default;
};

using ConformityFunction = std::function<ConformityScores(const ProbabilityVector&)>;

/// Default conformity function: the model's own class probabilities.
ConformityScores conformity_scores(const ProbabilityVector& model_probs);

inline constexpr const char* kIdentityConformityId = "identity";

struct CalibrationRecord {
  std::string id;
  ProbabilityVector model_probs;
  ProbabilityVector plausibility;
};

/// e(x, lambda) = sum_k lambda_k E_k.
double plausibility_score(const ConformityScores& scores, std::span<const double> lambda);

struct CalibratedThreshold {
  /// -infinity when the quantile index underflows (vacuous region).
  double tau = 0.0;
  double alpha = 0.0;
  std::size_t n_calibration = 0;
  /// floor(alpha (n + 1)), clamped to n; 0 means tau = -inf.
  std::size_t k_index = 0;
  /// Calibration scores sorted ascending.
  std::vector<double> score_trace;

  bool vacuous() const noexcept { return k_index == 0; }
};

/// floor(alpha (n + 1)) with a 1e-9 guard against products like
/// 0.29 * 100 = 28.999999999999996, clamped to n.
std::size_t quantile_index(double alpha, std::size_t n);

CalibratedThreshold calibrate(std::span<const CalibrationRecord> records, double alpha,
                              const ConformityFunction& conformity = conformity_scores);

}  // namespace credal
