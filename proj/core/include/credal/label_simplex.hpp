#pragma once

// Categorical distributions on a finite label space {0, ..., K-1}.
//
// Labels are 0-indexed everywhere in the library; only rendered output
// (SVG corner captions) shows them 1-indexed.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace credal {

/// Accepted deviation of a probability vector's sum from 1.
inline constexpr double kSimplexTol = 1e-9;
/// Inputs whose sum lies within this of 1 (but outside kSimplexTol) are
/// renormalized; anything further away is rejected.
inline constexpr double kRenormalizeTol = 1e-6;
/// Two probabilities closer than this are treated as tied.
inline constexpr double kTieTol = 1e-12;
/// LabelSet is a 64-bit mask.
inline constexpr std::size_t kMaxLabels = 64;

class LabelSpace {
 public:
  explicit LabelSpace(std::size_t k_count, std::vector<std::string> names = {});

  std::size_t size() const noexcept { return k_count_; }
  bool has_names() const noexcept { return !names_.empty(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  /// Display name; falls back to the 1-indexed label number.
  std::string display_name(std::size_t label) const;

  bool operator==(const LabelSpace&) const = default;

 private:
  std::size_t k_count_;
  std::vector<std::string> names_;
};

/// A point of the (K-1)-simplex. Construction validates and, when the sum is
/// only slightly off, renormalizes.
class ProbabilityVector {
 public:
  static ProbabilityVector from(std::vector<double> entries);
  static ProbabilityVector uniform(std::size_t k);
  static ProbabilityVector one_hot(std::size_t k, std::size_t label);

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::span<const double> values() const noexcept { return entries_; }
  operator std::span<const double>() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  bool operator==(const ProbabilityVector&) const = default;

 private:
  explicit ProbabilityVector(std::vector<double> entries) : entries_(std::move(entries)) {}
  std::vector<double> entries_;
};

/// Subset of {0, ..., K-1} stored as a bit mask (bit k <=> label k).
class LabelSet {
 public:
  using Mask = std::uint64_t;

  constexpr LabelSet() = default;
  constexpr explicit LabelSet(Mask mask) : mask_(mask) {}
  LabelSet(std::initializer_list<std::size_t> labels);

  static LabelSet full(std::size_t k);
  static LabelSet from_labels(std::span<const std::size_t> labels);

  constexpr Mask mask() const noexcept { return mask_; }
  constexpr bool empty() const noexcept { return mask_ == 0; }
  constexpr std::size_t size() const noexcept {
    return static_cast<std::size_t>(std::popcount(mask_));
  }
  constexpr bool contains(std::size_t label) const noexcept {
    return label < kMaxLabels && ((mask_ >> label) & 1U) != 0;
  }
  constexpr bool is_subset_of(LabelSet other) const noexcept {
    return (mask_ & ~other.mask_) == 0;
  }
  LabelSet complement(std::size_t k) const { return LabelSet(full(k).mask_ & ~mask_); }
  void insert(std::size_t label);

  std::vector<std::size_t> labels() const;
  /// "{0,2}" style rendering, used as a stable key in reports.
  std::string to_string() const;

  constexpr LabelSet operator|(LabelSet other) const noexcept { return LabelSet(mask_ | other.mask_); }
  constexpr LabelSet operator&(LabelSet other) const noexcept { return LabelSet(mask_ & other.mask_); }
  constexpr bool operator==(const LabelSet&) const = default;

 private:
  Mask mask_ = 0;
};

/// Entropy in bits with 0 log 0 = 0.
double shannon_entropy(std::span<const double> p);

/// Indices sorted by descending probability, ties broken by ascending index.
std::vector<std::size_t> descending_sort_permutation(std::span<const double> p);

/// Precise highest-density set {y : p_y >= c}, with c the largest cutoff
/// whose set mass reaches 1 - delta. Labels tied with the cutoff (within
/// kTieTol) are all included.
LabelSet highest_density_set(std::span<const double> p, double delta);

}  // namespace credal
