#include "credal/dataset_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "credal/error.hpp"
#include "credal/json_writer.hpp"
#include "json.hpp"

namespace credal {

namespace {

using nlohmann::json;

[[noreturn]] void parse_error(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, msg, line);
}

std::vector<double> read_reals(const json& obj, const char* key, std::size_t k,
                               std::size_t line) {
  const auto& arr = obj.at(key);
  if (!arr.is_array()) parse_error(line, std::string("'") + key + "' must be an array");
  if (arr.size() != k) {
    parse_error(line, std::string("'") + key + "' has " + std::to_string(arr.size()) +
                          " entries, expected " + std::to_string(k));
  }
  std::vector<double> out;
  out.reserve(k);
  for (const auto& v : arr) {
    if (!v.is_number()) parse_error(line, std::string("'") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

ProbabilityVector read_probs(const json& obj, const char* key, std::size_t k, std::size_t line) {
  try {
    return ProbabilityVector::from(read_reals(obj, key, k, line));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    parse_error(line, std::string("'") + key + "': " + e.detail());
  }
}

LabelSpace read_header(const json& h, std::size_t line) {
  if (!h.is_object()) parse_error(line, "header must be a JSON object");
  if (!h.contains("schema") || h["schema"] != kDatasetSchema) {
    parse_error(line, std::string("header schema must be \"") + kDatasetSchema + "\"");
  }
  if (!h.contains("k") || !h["k"].is_number_integer()) {
    parse_error(line, "header needs an integer 'k'");
  }
  const auto k = h["k"].get<std::int64_t>();
  if (k < 2) parse_error(line, "header 'k' must be at least 2");
  std::vector<std::string> names;
  if (h.contains("names")) {
    if (!h["names"].is_array()) parse_error(line, "'names' must be an array");
    for (const auto& n : h["names"]) {
      if (!n.is_string()) parse_error(line, "'names' must hold strings");
      names.push_back(n.get<std::string>());
    }
  }
  try {
    return LabelSpace(static_cast<std::size_t>(k), std::move(names));
  } catch (const Error& e) {
    parse_error(line, e.detail());
  }
}

DatasetRow read_row(const json& r, std::size_t k, std::size_t line) {
  if (!r.is_object()) parse_error(line, "row must be a JSON object");
  if (!r.contains("id") || !r["id"].is_string()) parse_error(line, "row needs a string 'id'");
  if (!r.contains("model_probs")) parse_error(line, "row needs 'model_probs'");
  DatasetRow row{r["id"].get<std::string>(), read_probs(r, "model_probs", k, line), std::nullopt,
                 std::nullopt, line};
  if (r.contains("plausibility") && !r["plausibility"].is_null()) {
    row.plausibility = read_probs(r, "plausibility", k, line);
  }
  if (r.contains("label") && !r["label"].is_null()) {
    const auto& l = r["label"];
    if (!l.is_number_integer() || l.get<std::int64_t>() < 0 ||
        static_cast<std::size_t>(l.get<std::int64_t>()) >= k) {
      parse_error(line, "'label' must be an integer in [0, k)");
    }
    row.label = static_cast<std::size_t>(l.get<std::int64_t>());
  }
  return row;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

DatasetFile parse_dataset(std::istream& in, const LabelSpace* empty_fallback) {
  std::string text;
  std::optional<LabelSpace> labels;
  std::vector<DatasetRow> rows;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (blank(text)) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      parse_error(line_no, std::string("invalid JSON: ") + e.what());
    }
    try {
      if (!labels) {
        labels = read_header(obj, line_no);
      } else {
        rows.push_back(read_row(obj, labels->size(), line_no));
      }
    } catch (const json::exception& e) {
      parse_error(line_no, e.what());
    }
  }
  if (!labels) {
    if (empty_fallback != nullptr && line_no == 0) return DatasetFile{*empty_fallback, {}};
    parse_error(line_no == 0 ? 1 : line_no, "missing header line");
  }
  return DatasetFile{std::move(*labels), std::move(rows)};
}

DatasetFile parse_dataset(std::string_view text, const LabelSpace* empty_fallback) {
  std::istringstream in{std::string(text)};
  return parse_dataset(in, empty_fallback);
}

std::string emit_dataset(const DatasetFile& file) {
  std::string out;
  {
    JsonWriter w;
    w.begin_object().field("schema", kDatasetSchema).field("k", file.labels.size());
    w.key("names").begin_array();
    for (const auto& n : file.labels.names()) w.value(n);
    w.end_array().end_object();
    out += w.str();
    out += '\n';
  }
  for (const auto& row : file.rows) {
    JsonWriter w;
    w.begin_object().field("id", row.id);
    w.key("model_probs").array(row.model_probs.values());
    if (row.plausibility) w.key("plausibility").array(row.plausibility->values());
    if (row.label) w.field("label", static_cast<std::uint64_t>(*row.label));
    w.end_object();
    out += w.str();
    out += '\n';
  }
  return out;
}

std::vector<CalibrationRecord> calibration_records(const DatasetFile& file) {
  std::vector<CalibrationRecord> out;
  out.reserve(file.rows.size());
  for (const auto& row : file.rows) {
    if (!row.plausibility) {
      throw Error(ErrorCode::ParseError, "row '" + row.id + "' has no 'plausibility'", row.line);
    }
    out.push_back({row.id, row.model_probs, *row.plausibility});
  }
  return out;
}

DatasetFile dataset_from_records(std::span<const CalibrationRecord> records, LabelSpace labels) {
  DatasetFile file{std::move(labels), {}};
  file.rows.reserve(records.size());
  for (const auto& r : records) {
    if (r.model_probs.size() != file.labels.size() || r.plausibility.size() != file.labels.size()) {
      throw Error(ErrorCode::DimensionMismatch, "record '" + r.id + "' has mismatched dimension");
    }
    file.rows.push_back({r.id, r.model_probs, r.plausibility, std::nullopt, 0});
  }
  return file;
}

std::string content_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool CalibrationArtifact::operator==(const CalibrationArtifact& o) const {
  const auto& a = threshold;
  const auto& b = o.threshold;
  const bool tau_eq = a.tau == b.tau || (std::isnan(a.tau) && std::isnan(b.tau));
  return tau_eq && a.alpha == b.alpha && a.n_calibration == b.n_calibration &&
         a.k_index == b.k_index && a.score_trace == b.score_trace && conformity == o.conformity &&
         dataset_digest == o.dataset_digest && dataset_path == o.dataset_path && labels == o.labels;
}

std::string emit_artifact(const CalibrationArtifact& artifact) {
  const auto& t = artifact.threshold;
  JsonWriter w;
  w.begin_object()
      .field("schema", kArtifactSchema)
      .field("alpha", t.alpha)
      .field("tau", t.tau)
      .field("k_index", t.k_index)
      .field("n_calibration", t.n_calibration)
      .field("conformity", artifact.conformity)
      .field("dataset_digest", artifact.dataset_digest)
      .field("dataset_path", artifact.dataset_path)
      .field("k", artifact.labels.size());
  w.key("names").begin_array();
  for (const auto& n : artifact.labels.names()) w.value(n);
  w.end_array();
  w.key("score_trace").array(t.score_trace);
  w.end_object();
  return w.str() + "\n";
}

namespace {

double read_real_or_inf(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf") return std::numeric_limits<double>::infinity();
  }
  throw Error(ErrorCode::ParseError, "expected a number or \"-inf\"");
}

}  // namespace

CalibrationArtifact parse_artifact(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("artifact is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("schema") != kArtifactSchema) {
      throw Error(ErrorCode::ParseError, std::string("artifact schema must be ") + kArtifactSchema);
    }
    CalibrationArtifact a;
    a.threshold.alpha = j.at("alpha").get<double>();
    a.threshold.tau = read_real_or_inf(j.at("tau"));
    a.threshold.k_index = j.at("k_index").get<std::size_t>();
    a.threshold.n_calibration = j.at("n_calibration").get<std::size_t>();
    a.conformity = j.at("conformity").get<std::string>();
    a.dataset_digest = j.at("dataset_digest").get<std::string>();
    a.dataset_path = j.value("dataset_path", std::string{});
    a.labels = LabelSpace(j.at("k").get<std::size_t>(),
                          j.value("names", std::vector<std::string>{}));
    a.threshold.score_trace = j.at("score_trace").get<std::vector<double>>();
    if (a.conformity != kIdentityConformityId) {
      throw Error(ErrorCode::ParseError, "unknown conformity function '" + a.conformity + "'");
    }
    return a;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed artifact: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void atomic_write(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::IoError, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot rename into '" + path + "'");
  }
}

}  // namespace credal
