#pragma once

// Lower/upper probabilities of label sets and the set-valued predictors
// built on them: the imprecise highest-density set (IHDS) and the
// plausibility-reduced predictive set (PRPS) baseline.

#include <cstddef>
#include <string_view>
#include <vector>

#include "credal/credal_region.hpp"
#include "credal/label_simplex.hpp"

namespace credal {

/// Tolerance for the sure-loss check on envelopes.
inline constexpr double kSureLossTol = 1e-9;
/// Comparisons against 1 - delta, and tie detection when sorting by lower
/// probability, use this resolution.
inline constexpr double kProbabilityTol = 1e-12;
inline constexpr std::size_t kDefaultKCap = 20;

/// Throws SureLossViolation unless sum(lower) <= 1 <= sum(upper).
void check_sure_loss(const ProbabilityEnvelope& env);

/// max{sum_{k in A} lower_k, 1 - sum_{k not in A} upper_k}, clamped to [0, 1].
double lower_probability(const ProbabilityEnvelope& env, LabelSet a);
/// 1 - lower_probability(env, complement(A)).
double upper_probability(const ProbabilityEnvelope& env, LabelSet a);

/// Exact infimum of sum_{k in A} lambda_k over the region, by vertex
/// enumeration.
double exact_lower_probability(const CredalRegion& region, LabelSet a);

/// Lower probabilities of all 2^K subsets, indexed by mask.
class LowerProbabilityTable {
 public:
  LowerProbabilityTable(const ProbabilityEnvelope& env, std::size_t k_cap = kDefaultKCap);

  std::size_t label_count() const noexcept { return k_count_; }
  double lower(LabelSet a) const { return values_[a.mask()]; }
  double upper(LabelSet a) const { return 1.0 - values_[a.complement(k_count_).mask()]; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t k_count_;
  std::vector<double> values_;
};

enum class SetMethod { IhdsAlgorithm1, IhdsMinCardinality, Prps };

std::string_view to_string(SetMethod method);

struct PredictionSetResult {
  LabelSet set;
  /// lower_probability(env, set) under the envelope.
  double lower_probability = 0.0;
  SetMethod method = SetMethod::IhdsAlgorithm1;
  double delta = 0.0;
};

/// Greedy set construction: all subsets sorted by ascending lower
/// probability (ties: smaller cardinality, then smaller mask), first one
/// reaching 1 - delta wins.
PredictionSetResult ihds_algorithm1(const ProbabilityEnvelope& env, double delta,
                                    std::size_t k_cap = kDefaultKCap);

/// Direct minimum-cardinality reading of the IHDS definition (ties by
/// smaller mask). Audits ihds_algorithm1.
PredictionSetResult ihds_min_cardinality(const ProbabilityEnvelope& env, double delta,
                                         std::size_t k_cap = kDefaultKCap);

/// Union of precise highest-density sets over the region's extreme points
/// and its lattice discretization at the given resolution.
PredictionSetResult prps(const CredalRegion& region, double delta, std::size_t resolution);

}  // namespace credal
