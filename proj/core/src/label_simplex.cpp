#include "credal/label_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "credal/error.hpp"

namespace credal {

LabelSpace::LabelSpace(std::size_t k_count, std::vector<std::string> names)
    : k_count_(k_count), names_(std::move(names)) {
  if (k_count_ < 2) {
    throw Error(ErrorCode::InvalidArgument, "label space needs at least 2 classes");
  }
  if (k_count_ > kMaxLabels) {
    throw Error(ErrorCode::LabelSpaceTooLarge,
                "at most " + std::to_string(kMaxLabels) + " classes are supported");
  }
  if (!names_.empty()) {
    if (names_.size() != k_count_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "expected " + std::to_string(k_count_) + " label names, got " +
                      std::to_string(names_.size()));
    }
    std::unordered_set<std::string> seen(names_.begin(), names_.end());
    if (seen.size() != names_.size()) {
      throw Error(ErrorCode::InvalidArgument, "label names must be distinct");
    }
  }
}

std::string LabelSpace::display_name(std::size_t label) const {
  if (has_names()) return names_.at(label);
  return std::to_string(label + 1);
}

ProbabilityVector ProbabilityVector::from(std::vector<double> entries) {
  if (entries.size() < 2) {
    throw Error(ErrorCode::InvalidProbability, "probability vector needs at least 2 entries");
  }
  double sum = 0.0;
  for (double v : entries) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::InvalidProbability, "entries must be finite and non-negative");
    }
    sum += v;
  }
  const double deviation = std::abs(sum - 1.0);
  if (deviation > kRenormalizeTol) {
    throw Error(ErrorCode::InvalidProbability,
                "entries sum to " + std::to_string(sum) + ", not 1");
  }
  // Vectors already on the simplex are kept bit-for-bit so that
  // serialization round-trips exactly.
  if (deviation > kSimplexTol) {
    for (double& v : entries) v /= sum;
  }
  return ProbabilityVector(std::move(entries));
}

ProbabilityVector ProbabilityVector::uniform(std::size_t k) {
  return from(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

ProbabilityVector ProbabilityVector::one_hot(std::size_t k, std::size_t label) {
  if (label >= k) throw Error(ErrorCode::InvalidArgument, "one-hot label out of range");
  std::vector<double> e(k, 0.0);
  e[label] = 1.0;
  return from(std::move(e));
}

LabelSet::LabelSet(std::initializer_list<std::size_t> labels) {
  for (std::size_t l : labels) insert(l);
}

LabelSet LabelSet::full(std::size_t k) {
  if (k > kMaxLabels) throw Error(ErrorCode::LabelSpaceTooLarge, "label set wider than 64 bits");
  return LabelSet(k == kMaxLabels ? ~Mask{0} : ((Mask{1} << k) - 1));
}

LabelSet LabelSet::from_labels(std::span<const std::size_t> labels) {
  LabelSet s;
  for (std::size_t l : labels) s.insert(l);
  return s;
}

void LabelSet::insert(std::size_t label) {
  if (label >= kMaxLabels) throw Error(ErrorCode::InvalidArgument, "label index out of range");
  mask_ |= Mask{1} << label;
}

std::vector<std::size_t> LabelSet::labels() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (Mask m = mask_; m != 0; m &= m - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  }
  return out;
}

std::string LabelSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (std::size_t l : labels()) {
    if (!first) out += ',';
    out += std::to_string(l);
    first = false;
  }
  out += '}';
  return out;
}

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return std::max(h, 0.0);
}

std::vector<std::size_t> descending_sort_permutation(std::span<const double> p) {
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  return order;
}

LabelSet highest_density_set(std::span<const double> p, double delta) {
  const double target = 1.0 - delta;
  const auto order = descending_sort_permutation(p);
  LabelSet out;
  double mass = 0.0;
  double cutoff = 0.0;
  bool reached = false;
  for (std::size_t label : order) {
    out.insert(label);
    mass += p[label];
    cutoff = p[label];
    if (mass >= target - kTieTol) {
      reached = true;
      break;
    }
  }
  if (!reached) return out;  // only possible through accumulated rounding
  for (std::size_t label : order) {
    if (p[label] >= cutoff - kTieTol) out.insert(label);
  }
  return out;
}

}  // namespace credal
