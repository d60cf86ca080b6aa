#include "credal/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "credal/error.hpp"
#include "credal/json_writer.hpp"
#include "credal/parallel.hpp"
#include "credal/random.hpp"

namespace credal {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::LengthMismatch,
                "inputs have lengths " + std::to_string(a) + " and " + std::to_string(b));
  }
}

void require_nonempty(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::LengthMismatch, "metrics need at least one test point");
}

}  // namespace

double derive_delta(double epsilon, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1)");
  }
  return 1.0 - (1.0 - epsilon) / (1.0 - alpha);
}

double type2_bound(double delta, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1)");
  }
  return delta / (1.0 - alpha);
}

ExperimentConfig ExperimentConfig::half_split(double epsilon, std::vector<std::uint64_t> seeds) {
  ExperimentConfig c;
  c.epsilon = epsilon;
  c.alpha = epsilon / 2.0;
  c.delta = epsilon / 2.0;
  c.seeds = std::move(seeds);
  return c;
}

ExperimentConfig ExperimentConfig::with_alpha(double epsilon, double alpha,
                                              std::vector<std::uint64_t> seeds) {
  ExperimentConfig c;
  c.epsilon = epsilon;
  c.alpha = alpha;
  c.delta = derive_delta(epsilon, alpha);
  c.seeds = std::move(seeds);
  return c;
}

void ExperimentConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
  }
  if (!(alpha > 0.0 && alpha < epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, epsilon)");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "delta must lie in [0, 1)");
  }
  if ((1.0 - alpha) * (1.0 - delta) < 1.0 - epsilon - 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "(1 - alpha)(1 - delta) must reach 1 - epsilon");
  }
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "at least one seed is required");
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "split fraction must lie in (0, 1)");
  }
}

std::vector<std::uint64_t> seed_range(std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{0});
  return seeds;
}

PointPrediction predict_point(const ConformityScores& scores, double tau,
                              const PredictOptions& options) {
  PointPrediction out;
  out.ihds.delta = out.ihds_min.delta = out.prps.delta = options.delta;
  out.ihds_min.method = SetMethod::IhdsMinCardinality;
  out.prps.method = SetMethod::Prps;

  const auto start = Clock::now();
  if (!CredalRegion::feasible(scores, tau)) {
    out.empty_region = true;
    out.ihds_ms = elapsed_ms(start);
    return out;
  }
  out.region.emplace(scores, tau);
  const auto& region = *out.region;
  out.envelope = envelope(region);
  out.ihds = ihds_algorithm1(*out.envelope, options.delta, options.k_cap);
  if (options.with_uncertainty) out.uncertainty = decompose(region);
  out.ihds_ms = elapsed_ms(start);

  out.ihds_min = ihds_min_cardinality(*out.envelope, options.delta, options.k_cap);
  const std::size_t k_count = region.size();
  for (std::size_t k = 0; k < k_count; ++k) out.one_hot_in_region |= region.contains_vertex(k);
  out.uniform_in_region = region.contains(ProbabilityVector::uniform(k_count));

  if (options.with_prps) {
    const auto prps_start = Clock::now();
    const std::size_t m = options.resolution == 0 ? default_resolution(k_count) : options.resolution;
    out.prps = prps(region, options.delta, m);
    out.prps_ms = elapsed_ms(prps_start);
  }
  return out;
}

double distribution_coverage(std::span<const CredalRegion> regions,
                             std::span<const ProbabilityVector> lambdas) {
  require_same_length(regions.size(), lambdas.size());
  require_nonempty(regions.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < regions.size(); ++i) hits += regions[i].contains(lambdas[i]) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(regions.size());
}

double distribution_coverage(std::span<const std::optional<CredalRegion>> regions,
                             std::span<const ProbabilityVector> lambdas) {
  require_same_length(regions.size(), lambdas.size());
  require_nonempty(regions.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (regions[i] && regions[i]->contains(lambdas[i])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(regions.size());
}

double label_coverage(std::span<const LabelSet> sets, std::span<const ProbabilityVector> lambdas) {
  require_same_length(sets.size(), lambdas.size());
  require_nonempty(sets.size());
  double total = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t k : sets[i].labels()) {
      if (k < lambdas[i].size()) total += lambdas[i][k];
    }
  }
  return total / static_cast<double>(sets.size());
}

double avg_inefficiency(std::span<const LabelSet> sets) {
  require_nonempty(sets.size());
  double total = 0.0;
  for (const auto& s : sets) total += static_cast<double>(s.size());
  return total / static_cast<double>(sets.size());
}

std::vector<LabelSet> default_type2_probes(std::size_t k) {
  std::vector<LabelSet> probes;
  for (std::size_t i = 0; i < k; ++i) probes.push_back(LabelSet{i});
  if (k <= 5) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) probes.push_back(LabelSet{i, j});
    }
  }
  return probes;
}

std::vector<Type2Estimate> type2_validity_estimate(
    std::span<const std::optional<ProbabilityEnvelope>> envelopes,
    std::span<const std::size_t> true_labels, double delta, std::span<const LabelSet> probes) {
  require_same_length(envelopes.size(), true_labels.size());
  std::vector<Type2Estimate> out;
  out.reserve(probes.size());
  for (const LabelSet probe : probes) {
    Type2Estimate est{probe, 0.0, 0, envelopes.size()};
    for (std::size_t n = 0; n < envelopes.size(); ++n) {
      if (!probe.contains(true_labels[n])) continue;
      const double upper = envelopes[n] ? upper_probability(*envelopes[n], probe) : 0.0;
      if (upper <= delta + kProbabilityTol) ++est.events;
    }
    if (est.trials > 0) {
      est.frequency = static_cast<double>(est.events) / static_cast<double>(est.trials);
    }
    out.push_back(est);
  }
  return out;
}

std::vector<Type2Estimate> type2_validity_estimate(std::span<const ProbabilityEnvelope> envelopes,
                                                   std::span<const std::size_t> true_labels,
                                                   double delta, std::span<const LabelSet> probes) {
  std::vector<std::optional<ProbabilityEnvelope>> wrapped(envelopes.begin(), envelopes.end());
  return type2_validity_estimate(wrapped, true_labels, delta, probes);
}

double type2_slack(double bound, std::size_t trials) {
  if (trials == 0) return 1.0;
  const double b = std::clamp(bound, 0.0, 1.0);
  return 3.0 * std::sqrt(b * (1.0 - b) / static_cast<double>(trials));
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

namespace {

struct SeedOutcome {
  SeedMetrics metrics;
  std::vector<double> ihds_ms;
  std::vector<double> prps_ms;
};

SeedOutcome run_seed(const ExperimentConfig& config, std::span<const CalibrationRecord> dataset,
                     std::uint64_t seed, std::span<const LabelSet> probes) {
  const std::size_t n = dataset.size();
  const auto n_cal = static_cast<std::size_t>(
      std::llround(config.split_fraction * static_cast<double>(n)));
  if (n_cal == 0 || n_cal >= n) {
    throw Error(ErrorCode::EmptyCalibration, "split leaves an empty calibration or test half");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng split_rng(mix_seed(seed, 1));
  split_rng.shuffle(order);

  std::vector<CalibrationRecord> calibration;
  calibration.reserve(n_cal);
  for (std::size_t i = 0; i < n_cal; ++i) calibration.push_back(dataset[order[i]]);
  const auto threshold = calibrate(calibration, config.alpha);

  const std::size_t n_test = n - n_cal;
  std::vector<const CalibrationRecord*> test(n_test);
  for (std::size_t i = 0; i < n_test; ++i) test[i] = &dataset[order[n_cal + i]];

  // Realized labels for the type-2 estimate, drawn sequentially so that the
  // stream does not depend on scheduling.
  Rng label_rng(mix_seed(seed, 2));
  std::vector<std::size_t> labels(n_test);
  for (std::size_t i = 0; i < n_test; ++i) {
    labels[i] = label_rng.categorical(test[i]->plausibility);
  }

  const std::size_t k_count = dataset.front().model_probs.size();
  PredictOptions options;
  options.delta = config.delta;
  options.resolution = config.resolution == 0 ? default_resolution(k_count) : config.resolution;
  options.k_cap = config.k_cap;
  options.with_uncertainty = false;

  std::vector<PointPrediction> predictions(n_test);
  parallel_for(n_test, [&](std::size_t i) {
    try {
      predictions[i] = predict_point(conformity_scores(test[i]->model_probs), threshold.tau, options);
    } catch (const Error& e) {
      throw Error(e.code(), "test point '" + test[i]->id + "': " + e.detail());
    }
  });

  SeedOutcome out;
  auto& m = out.metrics;
  m.seed = seed;
  m.tau = threshold.tau;
  m.n_calibration = n_cal;
  m.n_test = n_test;

  std::vector<std::optional<CredalRegion>> regions;
  std::vector<std::optional<ProbabilityEnvelope>> envelopes;
  std::vector<ProbabilityVector> lambdas;
  std::vector<LabelSet> ihds_sets;
  std::vector<LabelSet> prps_sets;
  regions.reserve(n_test);
  envelopes.reserve(n_test);
  lambdas.reserve(n_test);
  for (std::size_t i = 0; i < n_test; ++i) {
    auto& p = predictions[i];
    regions.push_back(std::move(p.region));
    envelopes.push_back(std::move(p.envelope));
    lambdas.push_back(test[i]->plausibility);
    ihds_sets.push_back(p.ihds.set);
    prps_sets.push_back(p.prps.set);
    if (p.empty_region) ++m.empty_regions;
    if (!p.ihds.set.is_subset_of(p.prps.set)) ++m.inclusion_violations;
    if (p.ihds.set != p.ihds_min.set) ++m.min_cardinality_disagreements;
    if (p.ihds.set.size() > p.ihds_min.set.size()) ++m.algorithm1_larger;
    out.ihds_ms.push_back(p.ihds_ms);
    out.prps_ms.push_back(p.prps_ms);
  }
  m.distribution_coverage = distribution_coverage(regions, lambdas);
  m.ihds = {label_coverage(ihds_sets, lambdas), avg_inefficiency(ihds_sets)};
  m.prps = {label_coverage(prps_sets, lambdas), avg_inefficiency(prps_sets)};
  m.type2 = type2_validity_estimate(envelopes, labels, config.delta, probes);
  return out;
}

}  // namespace

MetricsReport run_experiment(const ExperimentConfig& config,
                             std::span<const CalibrationRecord> dataset) {
  config.validate();
  if (dataset.empty()) throw Error(ErrorCode::EmptyCalibration, "dataset is empty");
  const std::size_t k_count = dataset.front().model_probs.size();
  for (const auto& r : dataset) {
    if (r.model_probs.size() != k_count || r.plausibility.size() != k_count) {
      throw Error(ErrorCode::DimensionMismatch, "record '" + r.id + "' has mismatched dimension");
    }
  }
  const auto probes =
      config.type2_probes.empty() ? default_type2_probes(k_count) : config.type2_probes;

  MetricsReport report;
  report.config = config;
  report.label_count = k_count;
  report.resolution = config.resolution == 0 ? default_resolution(k_count) : config.resolution;
  report.type2_bound = type2_bound(config.delta, config.alpha);

  std::vector<double> ihds_ms;
  std::vector<double> prps_ms;
  for (std::uint64_t seed : config.seeds) {
    auto outcome = run_seed(config, dataset, seed, probes);
    ihds_ms.insert(ihds_ms.end(), outcome.ihds_ms.begin(), outcome.ihds_ms.end());
    prps_ms.insert(prps_ms.end(), outcome.prps_ms.begin(), outcome.prps_ms.end());
    report.per_seed.push_back(std::move(outcome.metrics));
  }

  std::vector<double> dc, ilc, plc, iin, pin;
  for (const auto& s : report.per_seed) {
    dc.push_back(s.distribution_coverage);
    ilc.push_back(s.ihds.label_coverage);
    plc.push_back(s.prps.label_coverage);
    iin.push_back(s.ihds.avg_inefficiency);
    pin.push_back(s.prps.avg_inefficiency);
    report.total_points += s.n_test;
    report.inclusion_violations += s.inclusion_violations;
    report.min_cardinality_disagreements += s.min_cardinality_disagreements;
    report.empty_regions += s.empty_regions;
  }
  report.distribution_coverage = mean_std(dc);
  report.ihds_label_coverage = mean_std(ilc);
  report.prps_label_coverage = mean_std(plc);
  report.ihds_inefficiency = mean_std(iin);
  report.prps_inefficiency = mean_std(pin);

  for (std::size_t p = 0; p < probes.size(); ++p) {
    Type2Estimate pooled{probes[p], 0.0, 0, 0};
    double freq_sum = 0.0;
    for (const auto& s : report.per_seed) {
      pooled.events += s.type2[p].events;
      pooled.trials += s.type2[p].trials;
      freq_sum += s.type2[p].frequency;
    }
    pooled.frequency = freq_sum / static_cast<double>(report.per_seed.size());
    report.type2_estimates.push_back(pooled);
  }

  report.runtime_per_point_ms = median(std::move(ihds_ms));
  report.prps_runtime_per_point_ms = median(std::move(prps_ms));
  return report;
}

std::vector<GridCell> alpha_delta_grid(std::span<const CalibrationRecord> dataset,
                                       std::span<const double> epsilons, std::size_t grid_steps,
                                       const ExperimentConfig& base) {
  if (grid_steps < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 steps");
  std::vector<GridCell> cells;
  for (double eps : epsilons) {
    for (std::size_t i = 1; i < grid_steps; ++i) {
      ExperimentConfig config = base;
      config.epsilon = eps;
      config.alpha = eps * static_cast<double>(i) / static_cast<double>(grid_steps);
      config.delta = derive_delta(eps, config.alpha);
      cells.push_back({eps, config.alpha, config.delta, run_experiment(config, dataset)});
    }
  }
  return cells;
}

std::vector<CalibrationRecord> restrict_labels(std::span<const CalibrationRecord> records,
                                               LabelSet labels) {
  const auto keep = labels.labels();
  if (keep.size() < 2) throw Error(ErrorCode::InvalidArgument, "keep at least two labels");
  std::vector<CalibrationRecord> out;
  auto project = [&](const ProbabilityVector& p) -> std::optional<ProbabilityVector> {
    std::vector<double> v;
    double total = 0.0;
    for (std::size_t k : keep) {
      if (k >= p.size()) throw Error(ErrorCode::DimensionMismatch, "label outside record");
      v.push_back(p[k]);
      total += p[k];
    }
    if (!(total > 0.0)) return std::nullopt;
    for (double& x : v) x /= total;
    return ProbabilityVector::from(std::move(v));
  };
  for (const auto& r : records) {
    auto model = project(r.model_probs);
    auto plaus = project(r.plausibility);
    if (model && plaus) out.push_back({r.id, std::move(*model), std::move(*plaus)});
  }
  return out;
}

void write_metrics_csv_header(std::ostream& out) {
  out << "epsilon,alpha,delta,seed,method,distribution_coverage,label_coverage,"
         "avg_inefficiency,empty_regions\n";
}

void write_metrics_csv_rows(std::ostream& out, const MetricsReport& report) {
  const auto& c = report.config;
  for (const auto& s : report.per_seed) {
    for (int method = 0; method < 2; ++method) {
      const auto& mm = method == 0 ? s.ihds : s.prps;
      out << format_double(c.epsilon) << ',' << format_double(c.alpha) << ','
          << format_double(c.delta) << ',' << s.seed << ','
          << (method == 0 ? "IHDS" : "PRPS") << ',' << format_double(s.distribution_coverage)
          << ',' << format_double(mm.label_coverage) << ',' << format_double(mm.avg_inefficiency)
          << ',' << s.empty_regions << '\n';
    }
  }
}

namespace {

void write_mean_std(JsonWriter& w, std::string_view key, const MeanStd& v) {
  w.key(key).begin_object().field("mean", v.mean).field("std", v.std).end_object();
}

}  // namespace

std::string metrics_json(std::span<const MetricsReport> reports, bool include_timing) {
  JsonWriter w;
  w.begin_object().field("schema", "credal-metrics-v1").key("experiments").begin_array();
  for (const auto& r : reports) {
    w.begin_object();
    w.field("epsilon", r.config.epsilon)
        .field("alpha", r.config.alpha)
        .field("delta", r.config.delta)
        .field("split_fraction", r.config.split_fraction)
        .field("k", r.label_count)
        .field("resolution", r.resolution)
        .field("seeds", r.per_seed.size());
    write_mean_std(w, "distribution_coverage", r.distribution_coverage);
    w.key("ihds").begin_object();
    write_mean_std(w, "label_coverage", r.ihds_label_coverage);
    write_mean_std(w, "avg_inefficiency", r.ihds_inefficiency);
    w.end_object();
    w.key("prps").begin_object();
    write_mean_std(w, "label_coverage", r.prps_label_coverage);
    write_mean_std(w, "avg_inefficiency", r.prps_inefficiency);
    w.end_object();
    w.field("total_points", r.total_points)
        .field("empty_regions", r.empty_regions)
        .field("inclusion_violations", r.inclusion_violations)
        .field("min_cardinality_disagreements", r.min_cardinality_disagreements)
        .field("type2_bound", r.type2_bound);
    w.key("type2_estimates").begin_array();
    for (const auto& t : r.type2_estimates) {
      w.begin_object()
          .field("probe", t.probe.to_string())
          .field("frequency", t.frequency)
          .field("events", t.events)
          .field("trials", t.trials)
          .end_object();
    }
    w.end_array();
    w.key("per_seed").begin_array();
    for (const auto& s : r.per_seed) {
      w.begin_object()
          .field("seed", s.seed)
          .field("tau", s.tau)
          .field("distribution_coverage", s.distribution_coverage)
          .field("ihds_label_coverage", s.ihds.label_coverage)
          .field("ihds_avg_inefficiency", s.ihds.avg_inefficiency)
          .field("prps_label_coverage", s.prps.label_coverage)
          .field("prps_avg_inefficiency", s.prps.avg_inefficiency)
          .end_object();
    }
    w.end_array();
    if (include_timing) {
      w.field("runtime_per_point_ms", r.runtime_per_point_ms)
          .field("prps_runtime_per_point_ms", r.prps_runtime_per_point_ms);
    }
    w.end_object();
  }
  w.end_array().end_object();
  return w.str() + "\n";
}

void write_grid_csv(std::ostream& out, std::span<const GridCell> cells) {
  out << "epsilon,alpha,delta,ihds_avg_inefficiency,prps_avg_inefficiency,"
         "ihds_label_coverage,distribution_coverage\n";
  for (const auto& c : cells) {
    out << format_double(c.epsilon) << ',' << format_double(c.alpha) << ','
        << format_double(c.delta) << ',' << format_double(c.report.ihds_inefficiency.mean) << ','
        << format_double(c.report.prps_inefficiency.mean) << ','
        << format_double(c.report.ihds_label_coverage.mean) << ','
        << format_double(c.report.distribution_coverage.mean) << '\n';
  }
}

}  // namespace credal
