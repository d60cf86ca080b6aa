#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "credal/conformal.hpp"
#include "credal/credal_region.hpp"
#include "credal/credal_sets.hpp"
#include "credal/dataset_io.hpp"
#include "credal/error.hpp"
#include "credal/evaluation.hpp"
#include "credal/json_writer.hpp"
#include "credal/synthetic.hpp"
#include "credal/ternary_svg.hpp"
#include "credal/uncertainty.hpp"

namespace credal::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyCalibration:
    case ErrorCode::EmptyRegion:
      return kExitDegenerate;
    case ErrorCode::SureLossViolation:
      return kExitMath;
    default:
      return kExitInput;
  }
}

// calibrate accepts alpha = 0 (a vacuous artifact); evaluate needs (0, 1).
void check_alpha(double alpha, bool allow_zero) {
  const bool ok = allow_zero ? (alpha >= 0.0 && alpha < 1.0) : (alpha > 0.0 && alpha < 1.0);
  if (!ok) {
    throw UsageError(allow_zero ? "--alpha must lie in [0, 1)" : "--alpha must lie in (0, 1)");
  }
}

void check_delta(double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw UsageError("--delta must lie in [0, 1)");
}

DatasetFile load_dataset(const std::string& path, const LabelSpace* empty_fallback = nullptr) {
  return parse_dataset(read_file(path), empty_fallback);
}

void write_set(JsonWriter& w, std::string_view key, const PredictionSetResult& r) {
  const auto labels = r.set.labels();
  w.key(key).begin_object();
  w.key("set").array(labels);
  w.field("lower_probability", r.lower_probability);
  w.end_object();
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::size_t k = 3;
  double spread = 1.2;
  double temperature = 1.5;
  std::string out;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  if (a.n == 0) throw UsageError("--n must be at least 1");
  const auto spec = GeneratorSpec::balanced(a.k, a.spread, a.temperature);
  const auto data = generate_synthetic(spec, a.n, a.seed);
  auto file = dataset_from_records(data.records, LabelSpace(a.k));
  for (std::size_t i = 0; i < file.rows.size(); ++i) file.rows[i].label = data.components[i];
  atomic_write(a.out, emit_dataset(file));
  JsonWriter w;
  w.begin_object().field("n", a.n).field("k", a.k).field("seed", a.seed).end_object();
  out << w.str() << '\n';
  return kExitOk;
}

// --------------------------------------------------------------- calibrate

struct CalibrateArgs {
  std::string input;
  double alpha = 0.1;
  std::string out;
};

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
  check_alpha(a.alpha, true);
  const std::string bytes = read_file(a.input);
  const auto file = parse_dataset(bytes);
  const auto records = calibration_records(file);
  CalibrationArtifact artifact;
  artifact.threshold = calibrate(records, a.alpha);
  artifact.dataset_digest = content_digest(bytes);
  artifact.dataset_path = a.input;
  artifact.labels = file.labels;
  atomic_write(a.out, emit_artifact(artifact));

  const auto& t = artifact.threshold;
  JsonWriter w;
  w.begin_object()
      .field("n", t.n_calibration)
      .field("tau", t.tau)
      .field("k_index", t.k_index)
      .end_object();
  out << w.str() << '\n';
  return kExitOk;
}

// ----------------------------------------------------------------- predict

struct PredictArgs {
  std::string artifact;
  std::string input;
  double delta = 0.1;
  std::size_t resolution = 0;
  std::size_t k_cap = kDefaultKCap;
  bool no_prps = false;
  std::string out;
};

std::string prediction_row(const std::string& id, const PointPrediction& p) {
  JsonWriter w;
  w.begin_object().field("id", id).field("empty_region", p.empty_region);
  if (p.envelope) {
    w.key("envelope").begin_object();
    w.key("lower").array(p.envelope->lower);
    w.key("upper").array(p.envelope->upper);
    w.end_object();
  } else {
    w.key("envelope").null();
  }
  write_set(w, "ihds", p.ihds);
  write_set(w, "prps", p.prps);
  if (p.uncertainty) {
    const auto& u = *p.uncertainty;
    w.field("tu", u.upper_entropy).field("au", u.lower_entropy).field("eu", u.epistemic);
    w.key("optimizer")
        .begin_object()
        .field("used_ascent", u.used_ascent)
        .field("iterations", u.optimizer_iterations)
        .field("duality_gap", u.duality_gap)
        .end_object();
  } else {
    w.key("tu").null().key("au").null().key("eu").null();
  }
  w.field("one_hot_in_region", p.one_hot_in_region)
      .field("uniform_in_region", p.uniform_in_region)
      .end_object();
  return w.str();
}

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  check_delta(a.delta);
  const auto artifact = parse_artifact(read_file(a.artifact));
  const auto file = load_dataset(a.input, &artifact.labels);
  if (file.labels.size() != artifact.labels.size()) {
    throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(file.labels.size()) +
                                                  " labels but the artifact has " +
                                                  std::to_string(artifact.labels.size()));
  }
  const std::size_t k = file.labels.size();
  PredictOptions options;
  options.delta = a.delta;
  options.resolution = a.resolution == 0 ? default_resolution(k) : a.resolution;
  options.k_cap = a.k_cap;
  options.with_prps = !a.no_prps;

  std::string body;
  {
    JsonWriter w;
    w.begin_object()
        .field("schema", "credal-predictions-v1")
        .field("k", k)
        .field("tau", artifact.threshold.tau)
        .field("delta", a.delta)
        .field("resolution", options.resolution)
        .field("rows", file.rows.size())
        .end_object();
    body += w.str() + "\n";
  }
  std::size_t empty = 0;
  for (const auto& row : file.rows) {
    PointPrediction p;
    try {
      p = predict_point(conformity_scores(row.model_probs), artifact.threshold.tau, options);
    } catch (const Error& e) {
      throw Error(e.code(), "point '" + row.id + "': " + e.detail(), row.line);
    }
    if (p.empty_region) ++empty;
    body += prediction_row(row.id, p) + "\n";
  }
  atomic_write(a.out, body);
  JsonWriter w;
  w.begin_object().field("rows", file.rows.size()).field("empty_regions", empty).end_object();
  out << w.str() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string input;
  std::vector<double> epsilons;
  std::string alpha_policy = "half";
  bool grid = false;
  std::size_t grid_steps = 10;
  std::size_t seeds = 20;
  std::size_t resolution = 0;
  std::size_t k_cap = kDefaultKCap;
  std::vector<std::size_t> keep_labels;
  bool timing = false;
  std::string out;
};

void print_summary(std::ostream& out, std::span<const MetricsReport> reports) {
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %-8s %-8s %-16s %-16s %-16s %-16s %-16s\n", "epsilon",
                "alpha", "delta", "dist_cov", "ihds_label_cov", "prps_label_cov", "ihds_size",
                "prps_size");
  out << line;
  for (const auto& r : reports) {
    auto cell = [](const MeanStd& m) {
      char b[32];
      std::snprintf(b, sizeof b, "%.4f+-%.4f", m.mean, m.std);
      return std::string(b);
    };
    std::snprintf(line, sizeof line, "%-8.4f %-8.4f %-8.4f %-16s %-16s %-16s %-16s %-16s\n",
                  r.config.epsilon, r.config.alpha, r.config.delta,
                  cell(r.distribution_coverage).c_str(), cell(r.ihds_label_coverage).c_str(),
                  cell(r.prps_label_coverage).c_str(), cell(r.ihds_inefficiency).c_str(),
                  cell(r.prps_inefficiency).c_str());
    out << line;
  }
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  if (a.epsilons.empty()) throw UsageError("--epsilons needs at least one value");
  for (double e : a.epsilons) {
    if (!(e > 0.0 && e < 1.0)) throw UsageError("every epsilon must lie in (0, 1)");
  }
  if (a.seeds == 0) throw UsageError("--seeds must be at least 1");
  const bool grid = a.grid || a.alpha_policy == "grid";
  if (grid && a.grid_steps < 2) throw UsageError("--grid-steps must be at least 2");

  const auto file = load_dataset(a.input);
  auto records = calibration_records(file);
  if (!a.keep_labels.empty()) {
    records = restrict_labels(records, LabelSet::from_labels(a.keep_labels));
  }

  std::vector<MetricsReport> reports;
  for (double eps : a.epsilons) {
    auto config = ExperimentConfig::half_split(eps, seed_range(a.seeds));
    config.resolution = a.resolution;
    config.k_cap = a.k_cap;
    check_alpha(config.alpha, false);
    reports.push_back(run_experiment(config, records));
  }

  std::filesystem::create_directories(a.out);
  const std::filesystem::path dir(a.out);
  {
    std::ostringstream csv;
    write_metrics_csv_header(csv);
    for (const auto& r : reports) write_metrics_csv_rows(csv, r);
    atomic_write((dir / "metrics.csv").string(), csv.str());
  }
  atomic_write((dir / "metrics.json").string(), metrics_json(reports, false));
  if (a.timing) atomic_write((dir / "timing.json").string(), metrics_json(reports, true));

  if (grid) {
    ExperimentConfig base;
    base.seeds = seed_range(a.seeds);
    base.resolution = a.resolution;
    base.k_cap = a.k_cap;
    const auto cells = alpha_delta_grid(records, a.epsilons, a.grid_steps, base);
    std::ostringstream csv;
    write_grid_csv(csv, cells);
    atomic_write((dir / "grid.csv").string(), csv.str());
  }

  print_summary(out, reports);
  return kExitOk;
}

// -------------------------------------------------------------------- plot

struct PlotArgs {
  std::string artifact;
  std::string input;
  std::string point_id;
  bool no_lambda = false;
  std::string out;
};

int cmd_plot(const PlotArgs& a, std::ostream& out, std::ostream& err) {
  const auto artifact = parse_artifact(read_file(a.artifact));
  const std::string path = a.input.empty() ? artifact.dataset_path : a.input;
  if (path.empty()) throw UsageError("artifact names no dataset; pass --input");
  const std::string bytes = read_file(path);
  if (path == artifact.dataset_path && content_digest(bytes) != artifact.dataset_digest) {
    err << "warning: '" << path << "' no longer matches the digest recorded at calibration\n";
  }
  const auto file = parse_dataset(bytes);
  const DatasetRow* row = nullptr;
  for (const auto& r : file.rows) {
    if (r.id == a.point_id) {
      row = &r;
      break;
    }
  }
  if (row == nullptr) throw UsageError("no point with id '" + a.point_id + "' in " + path);

  const CredalRegion region(conformity_scores(row->model_probs), artifact.threshold.tau);
  TernaryPlot plot;
  plot.region = &region;
  if (!a.no_lambda && row->plausibility) plot.lambda = row->plausibility;
  plot.labels = file.labels;
  plot.title = "credal region for " + row->id;
  atomic_write(a.out, render_ternary(plot));
  JsonWriter w;
  w.begin_object()
      .field("id", row->id)
      .field("vertices", extreme_points(region).size())
      .end_object();
  out << w.str() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformal credal-set prediction"};
  app.name("credal");
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic Gaussian-mixture dataset");
  generate->add_option("--n", gen.n, "Number of points");
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--k", gen.k, "Number of labels");
  generate->add_option("--spread", gen.spread, "Radius of the circle of component means");
  generate->add_option("--temperature", gen.temperature, "Model temperature (1 = exact)");
  generate->add_option("--out", gen.out, "Output dataset path")->required();

  CalibrateArgs cal;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Compute the conformal threshold");
  calibrate_cmd->add_option("--input", cal.input, "Calibration dataset")->required();
  calibrate_cmd->add_option("--alpha", cal.alpha, "Miscoverage level")->required();
  calibrate_cmd->add_option("--out", cal.out, "Artifact path")->required();

  PredictArgs pred;
  auto* predict = app.add_subcommand("predict", "Predict credal regions and label sets");
  predict->add_option("--artifact", pred.artifact, "Calibration artifact")->required();
  predict->add_option("--input", pred.input, "Test dataset")->required();
  predict->add_option("--delta", pred.delta, "Set-level miscoverage")->required();
  predict->add_option("--resolution", pred.resolution, "PRPS lattice resolution (0 = policy)");
  predict->add_option("--k-cap", pred.k_cap, "Largest K for subset enumeration");
  predict->add_flag("--no-prps", pred.no_prps, "Skip the PRPS baseline");
  predict->add_option("--out", pred.out, "Output JSON-lines path")->required();

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Run the split/seed evaluation protocol");
  evaluate->add_option("--input", ev.input, "Dataset with plausibilities")->required();
  evaluate->add_option("--epsilons", ev.epsilons, "Comma-separated miscoverage levels")
      ->required()
      ->delimiter(',');
  evaluate->add_option("--alpha-policy", ev.alpha_policy, "half or grid")
      ->check(CLI::IsMember({"half", "grid"}));
  evaluate->add_flag("--grid", ev.grid, "Same as --alpha-policy grid");
  evaluate->add_option("--grid-steps", ev.grid_steps, "Alpha grid spacing is epsilon / steps");
  evaluate->add_option("--seeds", ev.seeds, "Number of random splits");
  evaluate->add_option("--resolution", ev.resolution, "PRPS lattice resolution (0 = policy)");
  evaluate->add_option("--k-cap", ev.k_cap, "Largest K for subset enumeration");
  evaluate->add_option("--keep-labels", ev.keep_labels, "Restrict to these labels")
      ->delimiter(',');
  evaluate->add_flag("--timing", ev.timing, "Also write timing.json");
  evaluate->add_option("--out", ev.out, "Output directory")->required();

  PlotArgs pl;
  auto* plot = app.add_subcommand("plot", "Render a ternary SVG of one point's region");
  plot->add_option("--artifact", pl.artifact, "Calibration artifact")->required();
  plot->add_option("--input", pl.input, "Dataset holding the point (default: calibration set)");
  plot->add_option("--point-id", pl.point_id, "Point id")->required();
  plot->add_flag("--no-lambda", pl.no_lambda, "Do not mark the plausibility vector");
  plot->add_option("--out", pl.out, "SVG path")->required();

  std::vector<const char*> argv;
  argv.push_back("credal");
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out);
    if (calibrate_cmd->parsed()) return cmd_calibrate(cal, out);
    if (predict->parsed()) return cmd_predict(pred, out);
    if (evaluate->parsed()) return cmd_evaluate(ev, out);
    if (plot->parsed()) return cmd_plot(pl, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitMath;
  }
  return kExitInput;
}

}  // namespace credal::cli
