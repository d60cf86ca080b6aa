#pragma once

// Experimental protocol: random calibration/test splits, per-point
// prediction, coverage and inefficiency metrics, the alpha/delta grid and an
// empirical type-2 validity estimate.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "credal/conformal.hpp"
#include "credal/credal_region.hpp"
#include "credal/credal_sets.hpp"
#include "credal/uncertainty.hpp"

namespace credal {

/// delta such that (1 - alpha)(1 - delta) = 1 - epsilon.
double derive_delta(double epsilon, double alpha);

/// delta / (1 - alpha), the type-2 validity bound.
double type2_bound(double delta, double alpha);

struct ExperimentConfig {
  double epsilon = 0.1;
  double alpha = 0.05;
  double delta = 0.05;
  std::vector<std::uint64_t> seeds;
  double split_fraction = 0.5;
  /// 0 selects default_resolution(K).
  std::size_t resolution = 0;
  std::size_t k_cap = kDefaultKCap;
  /// Probes for the type-2 estimate; empty selects singletons and (for
  /// K <= 5) pairs.
  std::vector<LabelSet> type2_probes;

  /// alpha = delta = epsilon / 2.
  static ExperimentConfig half_split(double epsilon, std::vector<std::uint64_t> seeds);
  /// Explicit alpha, delta derived from epsilon.
  static ExperimentConfig with_alpha(double epsilon, double alpha, std::vector<std::uint64_t> seeds);

  void validate() const;
};

/// Seeds 0, 1, ..., count - 1.
std::vector<std::uint64_t> seed_range(std::size_t count);

/// Everything computed for one test point.
struct PointPrediction {
  bool empty_region = false;
  std::optional<CredalRegion> region;
  std::optional<ProbabilityEnvelope> envelope;
  PredictionSetResult ihds;
  PredictionSetResult ihds_min;
  PredictionSetResult prps;
  std::optional<UncertaintyReport> uncertainty;
  bool one_hot_in_region = false;
  bool uniform_in_region = false;
  /// Wall time of region + envelope + ihds_algorithm1 (+ uncertainty when
  /// requested), and of the PRPS baseline.
  double ihds_ms = 0.0;
  double prps_ms = 0.0;
};

struct PredictOptions {
  double delta = 0.05;
  std::size_t resolution = 0;
  std::size_t k_cap = kDefaultKCap;
  bool with_uncertainty = true;
  bool with_prps = true;
};

/// Regions whose threshold exceeds every conformity score are empty: the
/// point is reported with empty sets and no envelope.
PointPrediction predict_point(const ConformityScores& scores, double tau,
                              const PredictOptions& options);

/// Fraction of lambdas inside their regions; an absent region covers
/// nothing.
double distribution_coverage(std::span<const CredalRegion> regions,
                             std::span<const ProbabilityVector> lambdas);
double distribution_coverage(std::span<const std::optional<CredalRegion>> regions,
                             std::span<const ProbabilityVector> lambdas);

/// (1/N) sum_n sum_{k in set_n} lambda_{n,k}.
double label_coverage(std::span<const LabelSet> sets, std::span<const ProbabilityVector> lambdas);

double avg_inefficiency(std::span<const LabelSet> sets);

/// Singletons, plus pairs when K <= 5.
std::vector<LabelSet> default_type2_probes(std::size_t k);

struct Type2Estimate {
  LabelSet probe;
  double frequency = 0.0;
  std::size_t events = 0;
  std::size_t trials = 0;
};

/// Empirical frequency of {upper_probability(env_n, A) <= delta and
/// label_n in A} per probe. An absent envelope is an empty credal set whose
/// upper probability is 0.
std::vector<Type2Estimate> type2_validity_estimate(
    std::span<const std::optional<ProbabilityEnvelope>> envelopes,
    std::span<const std::size_t> true_labels, double delta, std::span<const LabelSet> probes);
std::vector<Type2Estimate> type2_validity_estimate(std::span<const ProbabilityEnvelope> envelopes,
                                                   std::span<const std::size_t> true_labels,
                                                   double delta, std::span<const LabelSet> probes);

/// 3-sigma binomial slack around the bound for `trials` draws.
double type2_slack(double bound, std::size_t trials);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
};

MeanStd mean_std(std::span<const double> values);

struct MethodMetrics {
  double label_coverage = 0.0;
  double avg_inefficiency = 0.0;
};

struct SeedMetrics {
  std::uint64_t seed = 0;
  double tau = 0.0;
  std::size_t n_calibration = 0;
  std::size_t n_test = 0;
  std::size_t empty_regions = 0;
  double distribution_coverage = 0.0;
  MethodMetrics ihds;
  MethodMetrics prps;
  /// Test points where the IHDS is not a subset of the PRPS.
  std::size_t inclusion_violations = 0;
  /// Points where ihds_algorithm1 and the min-cardinality oracle differ.
  std::size_t min_cardinality_disagreements = 0;
  /// Points where the ihds_algorithm1 set is larger than the oracle's.
  std::size_t algorithm1_larger = 0;
  std::vector<Type2Estimate> type2;
};

struct MetricsReport {
  ExperimentConfig config;
  std::size_t label_count = 0;
  std::size_t resolution = 0;
  std::vector<SeedMetrics> per_seed;

  MeanStd distribution_coverage;
  MeanStd ihds_label_coverage;
  MeanStd prps_label_coverage;
  MeanStd ihds_inefficiency;
  MeanStd prps_inefficiency;

  /// Mean per-seed type-2 frequency for each probe.
  std::vector<Type2Estimate> type2_estimates;
  double type2_bound = 0.0;

  std::size_t total_points = 0;
  std::size_t inclusion_violations = 0;
  std::size_t min_cardinality_disagreements = 0;
  std::size_t empty_regions = 0;

  /// Median per-point wall times in milliseconds (not deterministic).
  double runtime_per_point_ms = 0.0;
  double prps_runtime_per_point_ms = 0.0;
};

MetricsReport run_experiment(const ExperimentConfig& config,
                             std::span<const CalibrationRecord> dataset);

struct GridCell {
  double epsilon = 0.0;
  double alpha = 0.0;
  double delta = 0.0;
  MetricsReport report;
};

/// For each epsilon, alpha = i epsilon / grid_steps for i = 1 .. grid_steps-1.
std::vector<GridCell> alpha_delta_grid(std::span<const CalibrationRecord> dataset,
                                       std::span<const double> epsilons, std::size_t grid_steps,
                                       const ExperimentConfig& base);

/// Restricts every record to `labels` and renormalizes both vectors; records
/// with no mass on the subset (in either vector) are dropped.
std::vector<CalibrationRecord> restrict_labels(std::span<const CalibrationRecord> records,
                                               LabelSet labels);

// Output formats. CSV has one row per (epsilon, alpha, seed, method);
// timing fields appear only in JSON and only when requested.
void write_metrics_csv_header(std::ostream& out);
void write_metrics_csv_rows(std::ostream& out, const MetricsReport& report);
std::string metrics_json(std::span<const MetricsReport> reports, bool include_timing);
void write_grid_csv(std::ostream& out, std::span<const GridCell> cells);

}  // namespace credal
