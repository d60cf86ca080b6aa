// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. Informational figures are printed as indented lines.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "credal/conformal.hpp"
#include "credal/credal_region.hpp"
#include "credal/credal_sets.hpp"
#include "credal/dataset_io.hpp"
#include "credal/evaluation.hpp"
#include "credal/synthetic.hpp"
#include "credal/uncertainty.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace credal;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  if (!ok) ++failures;
}

template <typename... Args>
void info(const char* fmt, Args... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
}

const std::vector<double> kEpsilons{0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
constexpr std::size_t kN = 1000;
constexpr std::size_t kSeeds = 20;

std::vector<CalibrationRecord> dataset(std::size_t k, double spread, std::uint64_t seed = 0) {
  return generate_synthetic(GeneratorSpec::balanced(k, spread), kN, seed).records;
}

bool has_ties(const std::vector<CalibrationRecord>& records) {
  std::set<double> seen;
  for (const auto& r : records) {
    const auto e = conformity_scores(r.model_probs);
    if (!seen.insert(plausibility_score(e, r.plausibility)).second) return true;
  }
  return false;
}

std::vector<MetricsReport> sweep(const std::vector<CalibrationRecord>& data, std::size_t seeds) {
  std::vector<MetricsReport> out;
  for (double eps : kEpsilons) {
    out.push_back(run_experiment(ExperimentConfig::half_split(eps, seed_range(seeds)), data));
  }
  return out;
}

// ------------------------------------------------------------------ 1, 2, 3, 7

void coverage_criteria(const std::vector<MetricsReport>& reports, bool ties) {
  bool lower_ok = true;
  bool band_ok = true;
  for (const auto& r : reports) {
    const double target = 1.0 - r.config.alpha;
    const double m = r.distribution_coverage.mean;
    info("eps=%.2f alpha=%.3f coverage %.4f (sd %.4f) target %.4f", r.config.epsilon,
         r.config.alpha, m, r.distribution_coverage.std, target);
    lower_ok = lower_ok && m >= target - 0.03 && m <= 1.0;
    band_ok = band_ok && m <= target + 0.03;
  }
  info("plausibility scores %s ties", ties ? "have" : "have no");
  verdict(1, lower_ok && (ties || band_ok),
          ties ? "distribution coverage >= 1-alpha-0.03"
               : "distribution coverage within 1-alpha +/- 0.03");

  bool ok = true;
  for (const auto& r : reports) {
    const double bound = (1.0 - r.config.delta) * (1.0 - r.config.alpha);
    info("eps=%.2f label coverage IHDS %.4f PRPS %.4f bound %.4f", r.config.epsilon,
         r.ihds_label_coverage.mean, r.prps_label_coverage.mean, bound);
    ok = ok && r.ihds_label_coverage.mean >= bound - 0.03 &&
         r.prps_label_coverage.mean >= bound - 0.03;
  }
  verdict(2, ok, "label coverage >= (1-delta)(1-alpha)-0.03 for IHDS and PRPS");
}

struct OrderingTally {
  std::size_t points = 0;
  std::size_t violations = 0;
  std::size_t seed_runs = 0;
  std::size_t ordering_breaks = 0;
};

void tally(OrderingTally& t, const std::vector<MetricsReport>& reports) {
  for (const auto& r : reports) {
    t.points += r.total_points;
    t.violations += r.inclusion_violations;
    for (const auto& s : r.per_seed) {
      ++t.seed_runs;
      if (s.ihds.avg_inefficiency > s.prps.avg_inefficiency + 1e-12) ++t.ordering_breaks;
    }
  }
}

void efficiency_criterion(const std::vector<MetricsReport>& diffuse) {
  OrderingTally t;
  tally(t, diffuse);
  tally(t, sweep(dataset(3, 2.5), kSeeds));
  info("K=3: %zu points, %zu IHDS-not-in-PRPS, %zu/%zu seed runs with IHDS less efficient",
       t.points, t.violations, t.ordering_breaks, t.seed_runs);

  PredictOptions opt;
  opt.delta = 0.8;
  const auto fx = predict_point(ConformityScores{{0.7, 0.2, 0.1}}, 0.25, opt);
  const bool strict = fx.ihds.set == LabelSet{0, 1} && fx.prps.set == LabelSet{0, 1, 2};
  info("fixture IHDS %s PRPS %s", fx.ihds.set.to_string().c_str(),
       fx.prps.set.to_string().c_str());

  OrderingTally k5;
  std::vector<MetricsReport> r5;
  r5.push_back(run_experiment(ExperimentConfig::half_split(0.1, seed_range(3)), dataset(5, 2.5)));
  tally(k5, r5);
  info("K=5 (informational): %zu points, %zu IHDS-not-in-PRPS, %zu min-cardinality disagreements",
       k5.points, k5.violations, r5[0].min_cardinality_disagreements);

  verdict(3, t.violations == 0 && t.ordering_breaks == 0 && strict,
          "IHDS subset of PRPS on every point, per-seed inefficiency ordering, strict fixture");
}

void type2_criterion(const std::vector<MetricsReport>& reports) {
  bool ok = true;
  double worst = -1.0;
  for (const auto& r : reports) {
    for (const auto& e : r.type2_estimates) {
      const double limit = r.type2_bound + type2_slack(r.type2_bound, e.trials);
      worst = std::max(worst, e.frequency - limit);
      ok = ok && e.frequency <= limit;
    }
  }
  info("largest frequency minus (bound + slack): %.4f", worst);
  verdict(7, ok, "type-2 probe frequencies <= delta/(1-alpha) + 3 sigma");

  const double b = type2_bound(0.05, 0.05);
  info("type2_bound(delta=0.05, alpha=0.05) = %.6f", b);
  verdict(7, std::abs(b - 0.526) < 5e-4, "worked bound at delta=alpha=0.05 equals 0.526");
}

// ---------------------------------------------------------------------- 4

void oracle_criterion() {
  std::mt19937_64 rng(4);
  std::size_t le_breaks = 0;
  std::size_t eq_breaks = 0;
  std::size_t subsets = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 2 + i % 4;
    const auto c = gen::random_region(rng, k);
    const auto env = envelope(gen::make_region(c));
    const std::uint64_t full = (1ULL << k) - 1;
    for (std::uint64_t m = 1; m <= full; ++m) {
      ++subsets;
      const double approx = lower_probability(env, LabelSet(m));
      const double exact = oracle::exact_lower(c.e, c.tau, m);
      if (approx > exact + 1e-9) ++le_breaks;
      const int card = std::popcount(m);
      if ((card == 1 || card == static_cast<int>(k) - 1) && std::abs(approx - exact) > 1e-9) {
        ++eq_breaks;
      }
    }
  }
  double grid_dev = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto c = gen::random_region(rng, 3);
    const auto env = envelope(gen::make_region(c));
    const auto g = oracle::grid_envelope(c.e, c.tau, 200);
    for (int j = 0; j < 3; ++j) {
      grid_dev = std::max({grid_dev, std::abs(env.lower[j] - g.lower[j]),
                           std::abs(env.upper[j] - g.upper[j])});
    }
  }
  info("%zu subsets: %zu above exact, %zu singleton/co-singleton mismatches", subsets, le_breaks,
       eq_breaks);
  info("max |closed form - grid(m=200)| at K=3: %.2e", grid_dev);
  verdict(4, le_breaks == 0 && eq_breaks == 0 && grid_dev <= 5e-3,
          "envelope lower probability <= exact, tight at |A| in {1, K-1}, grid within 5e-3");
}

// ---------------------------------------------------------------------- 5

void algorithm1_criterion() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t below = 0;
  std::size_t disagreements = 0;
  std::size_t smaller = 0;
  std::size_t order_mismatch = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 2 + i % 9;
    const auto env = gen::random_envelope(rng, k);
    const double delta = u(rng);
    const auto r = ihds_algorithm1(env, delta);
    if (oracle::eq3(env.lower, env.upper, r.set.mask()) < 1.0 - delta - 1e-12) ++below;
    if (r.set.mask() != oracle::algorithm1_sorted(env.lower, env.upper, delta)) ++order_mismatch;
    const auto best = oracle::min_cardinality(env.lower, env.upper, delta);
    const auto best_size = static_cast<std::size_t>(std::popcount(best));
    if (r.set.size() != best_size) ++disagreements;
    if (r.set.size() < best_size) ++smaller;
  }
  info("disagreement rate with min-cardinality oracle: %.3f (%zu/1000)", disagreements / 1000.0,
       disagreements);
  info("sorted-scan oracle mismatches: %zu", order_mismatch);
  verdict(5, below == 0 && smaller == 0 && order_mismatch == 0,
          "ihds_algorithm1 meets 1-delta and is never smaller than the minimum");
}

// ---------------------------------------------------------------------- 6

void uncertainty_criterion() {
  const auto fx = decompose(CredalRegion(ConformityScores{{0.7, 0.2, 0.1}}, 0.25));
  const bool fixture_ok = std::abs(fx.lower_entropy) <= 1e-12 &&
                          std::abs(fx.upper_entropy - std::log2(3.0)) <= 1e-6 &&
                          std::abs(fx.epistemic - fx.upper_entropy) <= 1e-12;
  info("fixture AU %.3g TU %.9f EU %.9f", fx.lower_entropy, fx.upper_entropy, fx.epistemic);

  std::mt19937_64 rng(6);
  std::size_t outside = 0;
  std::size_t gap_breaks = 0;
  std::size_t negative = 0;
  std::size_t ascents = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 2 + i % 5;
    const auto rep = decompose(gen::make_region(gen::random_region(rng, k)));
    const auto& b = *rep.appendix_bounds;
    if (rep.upper_entropy < b.tu_lo - 1e-9 || rep.upper_entropy > b.tu_hi + 1e-9) ++outside;
    if (rep.used_ascent) {
      ++ascents;
      worst_gap = std::max(worst_gap, rep.duality_gap);
      if (rep.duality_gap > 1e-7) ++gap_breaks;
    }
    if (rep.epistemic < 0.0) ++negative;
  }
  info("appendix interval misses %zu/1000; %zu ascents, worst gap %.2e bits", outside, ascents,
       worst_gap);
  verdict(6, fixture_ok && outside == 0 && gap_breaks == 0 && negative == 0,
          "fixture AU=0 TU=EU=log2(3), interval contains TU, gap <= 1e-7, EU >= 0");
}

// ---------------------------------------------------------------------- 8

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.empty() ? 0.0 : v[v.size() / 2];
}

double full_pipeline_median_ms(std::size_t k) {
  const auto data = dataset(k, 1.2);
  const std::size_t half = data.size() / 2;
  const auto th = calibrate(std::span(data).first(half), 0.05);
  PredictOptions opt;
  opt.delta = 0.05;
  opt.with_prps = false;
  std::vector<double> times;
  for (std::size_t i = half; i < data.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    (void)predict_point(conformity_scores(data[i].model_probs), th.tau, opt);
    times.push_back(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return median(times);
}

void runtime_criterion() {
  const auto cfg = ExperimentConfig::half_split(0.1, seed_range(5));
  const auto r3 = run_experiment(cfg, dataset(3, 1.2));
  const auto r5 = run_experiment(cfg, dataset(5, 1.2));
  const double ratio = r5.runtime_per_point_ms / r3.runtime_per_point_ms;
  info("median IHDS prediction: K=3 %.4f ms, K=5 %.4f ms, ratio %.2f", r3.runtime_per_point_ms,
       r5.runtime_per_point_ms, ratio);
  info("median PRPS: K=3 %.4f ms (m=%zu), K=5 %.4f ms (m=%zu)", r3.prps_runtime_per_point_ms,
       r3.resolution, r5.prps_runtime_per_point_ms, r5.resolution);
  const double u3 = full_pipeline_median_ms(3);
  const double u5 = full_pipeline_median_ms(5);
  info("median with uncertainty decomposition: K=3 %.4f ms, K=5 %.4f ms, ratio %.2f", u3, u5,
       u5 / u3);
  verdict(8, ratio < 5.0, "per-point prediction time grows < 5x from K=3 to K=5");
}

// ---------------------------------------------------------------------- 9

struct Run {
  int code;
  std::string out;
};

Run invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str()};
}

std::string snapshot(const std::filesystem::path& dir) {
  std::string all;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    all += f.filename().string() + "\n" + read_file(f.string());
  }
  return all;
}

void determinism_criterion() {
  TempDir a, b;
  std::string stdout_a, stdout_b;
  bool codes_ok = true;
  for (auto* pair : {&a, &b}) {
    TempDir& d = *pair;
    std::string& log = pair == &a ? stdout_a : stdout_b;
    const auto step = [&](std::vector<std::string> args) {
      const auto r = invoke(args);
      codes_ok = codes_ok && r.code == 0;
      log += r.out;
    };
    step({"generate", "--n", "400", "--seed", "9", "--out", d / "data.jsonl"});
    step({"calibrate", "--input", d / "data.jsonl", "--alpha", "0.05", "--out", d / "art.json"});
    step({"predict", "--artifact", d / "art.json", "--input", d / "data.jsonl", "--delta", "0.05",
          "--out", d / "pred.jsonl"});
    step({"evaluate", "--input", d / "data.jsonl", "--epsilons", "0.1,0.2", "--seeds", "4",
          "--grid", "--grid-steps", "4", "--timing", "--out", d / "eval"});
    std::filesystem::remove(std::filesystem::path(d / "eval") / "timing.json");
    step({"plot", "--artifact", d / "art.json", "--point-id", "syn-3", "--out", d / "p.svg"});
  }
  // The artifact records its dataset path, which differs between the two
  // directories; compare everything else byte for byte.
  auto sa = snapshot(a.path);
  auto sb = snapshot(b.path);
  const auto strip = [](std::string s, const std::string& dir) {
    for (std::size_t p; (p = s.find(dir)) != std::string::npos;) s.erase(p, dir.size());
    return s;
  };
  sa = strip(sa, a.path.string());
  sb = strip(sb, b.path.string());
  info("%zu bytes of outputs compared", sa.size());
  verdict(9, codes_ok && sa == sb && stdout_a == stdout_b,
          "repeated CLI invocations give byte-identical non-timing outputs");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto diffuse = dataset(3, 1.2);
  const auto reports = sweep(diffuse, kSeeds);
  coverage_criteria(reports, has_ties(diffuse));
  efficiency_criterion(reports);
  oracle_criterion();
  algorithm1_criterion();
  uncertainty_criterion();
  type2_criterion(reports);
  runtime_criterion();
  determinism_criterion();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  info("total %.1f s", secs);
  return failures == 0 ? 0 : 1;
}
