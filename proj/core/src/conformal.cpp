#include "credal/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "credal/error.hpp"

namespace credal {

ConformityScores conformity_scores(const ProbabilityVector& model_probs) {
  return ConformityScores{std::vector<double>(model_probs.begin(), model_probs.end())};
}

double plausibility_score(const ConformityScores& scores, std::span<const double> lambda) {
  if (scores.size() != lambda.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "conformity scores have " + std::to_string(scores.size()) +
                    " labels, plausibility has " + std::to_string(lambda.size()));
  }
  double e = 0.0;
  for (std::size_t k = 0; k < lambda.size(); ++k) e += lambda[k] * scores.per_label[k];
  return e;
}

std::size_t quantile_index(double alpha, std::size_t n) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
  }
  const double raw = std::floor(alpha * static_cast<double>(n + 1) + 1e-9);
  const auto k = static_cast<std::size_t>(std::max(raw, 0.0));
  return std::min(k, n);
}

CalibratedThreshold calibrate(std::span<const CalibrationRecord> records, double alpha,
                              const ConformityFunction& conformity) {
  if (records.empty()) throw Error(ErrorCode::EmptyCalibration, "calibration set is empty");
  const std::size_t k_labels = records.front().model_probs.size();

  CalibratedThreshold out;
  out.alpha = alpha;
  out.n_calibration = records.size();
  out.k_index = quantile_index(alpha, records.size());
  out.score_trace.reserve(records.size());
  for (const auto& r : records) {
    if (r.model_probs.size() != k_labels || r.plausibility.size() != k_labels) {
      throw Error(ErrorCode::DimensionMismatch, "record '" + r.id + "' has mismatched dimension");
    }
    out.score_trace.push_back(plausibility_score(conformity(r.model_probs), r.plausibility));
  }
  std::sort(out.score_trace.begin(), out.score_trace.end());
  out.tau = out.k_index == 0 ? -std::numeric_limits<double>::infinity()
                             : out.score_trace[out.k_index - 1];
  return out;
}

}  // namespace credal
