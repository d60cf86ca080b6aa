#pragma once

// JSON-lines datasets and calibration artifacts.
//
// A dataset file starts with a header line
//   {"schema": "credal-v1", "k": K, "names": [...]}
// followed by one object per example:
//   {"id": "...", "model_probs": [...], "plausibility": [...], "label": k}
// where plausibility and label are optional.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "credal/conformal.hpp"
#include "credal/label_simplex.hpp"

namespace credal {

inline constexpr const char* kDatasetSchema = "credal-v1";
inline constexpr const char* kArtifactSchema = "credal-artifact-v1";

struct DatasetRow {
  std::string id;
  ProbabilityVector model_probs;
  std::optional<ProbabilityVector> plausibility;
  std::optional<std::size_t> label;
  /// 1-based line in the source file; 0 for rows built in memory.
  std::size_t line = 0;

  bool operator==(const DatasetRow& o) const {
    return id == o.id && model_probs == o.model_probs && plausibility == o.plausibility &&
           label == o.label;
  }
};

struct DatasetFile {
  LabelSpace labels;
  std::vector<DatasetRow> rows;

  bool operator==(const DatasetFile& o) const { return labels == o.labels && rows == o.rows; }
};

/// Parses a dataset. Errors are ParseError with the offending line. When
/// `empty_fallback` is given, a completely empty stream is accepted and
/// yields zero rows over that label space.
DatasetFile parse_dataset(std::istream& in, const LabelSpace* empty_fallback = nullptr);
DatasetFile parse_dataset(std::string_view text, const LabelSpace* empty_fallback = nullptr);

std::string emit_dataset(const DatasetFile& file);

/// Rows as calibration records; every row needs a plausibility vector.
std::vector<CalibrationRecord> calibration_records(const DatasetFile& file);

DatasetFile dataset_from_records(std::span<const CalibrationRecord> records, LabelSpace labels);

/// FNV-1a 64-bit hash of the bytes, as 16 lowercase hex digits.
std::string content_digest(std::string_view bytes);

struct CalibrationArtifact {
  CalibratedThreshold threshold;
  std::string conformity = kIdentityConformityId;
  std::string dataset_digest;
  std::string dataset_path;
  LabelSpace labels{2};

  bool operator==(const CalibrationArtifact& o) const;
};

std::string emit_artifact(const CalibrationArtifact& artifact);
CalibrationArtifact parse_artifact(std::string_view text);

std::string read_file(const std::string& path);
/// Writes to a sibling temporary file and renames it over `path`.
void atomic_write(const std::string& path, std::string_view content);

}  // namespace credal
