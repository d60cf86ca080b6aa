#pragma once

// The conformal credal region {lambda in simplex : sum_k lambda_k E_k >= tau}.
//
// The region is kept as (E, tau). Since the plausibility score is linear in
// lambda the region is the simplex cut by one half-space, so every exact
// query below reduces to closed-form linear algebra. The lattice
// discretization exists only as an oracle and for plotting.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "credal/conformal.hpp"
#include "credal/label_simplex.hpp"

namespace credal {

inline constexpr double kMembershipTol = 1e-12;
inline constexpr double kVertexDedupTol = 1e-10;

class CredalRegion {
 public:
  /// Throws EmptyRegion when max_k E_k < tau.
  CredalRegion(ConformityScores scores, double tau);

  /// True when the region {E . lambda >= tau} meets the simplex.
  static bool feasible(const ConformityScores& scores, double tau);

  const ConformityScores& scores() const noexcept { return scores_; }
  double tau() const noexcept { return tau_; }
  std::size_t size() const noexcept { return scores_.size(); }
  /// tau = -inf: the region is the whole simplex.
  bool vacuous() const noexcept;

  /// Weak inequality: e(lambda) >= tau - kMembershipTol.
  bool contains(std::span<const double> lambda) const;
  /// Whether simplex vertex e_k belongs to the region.
  bool contains_vertex(std::size_t k) const;

 private:
  ConformityScores scores_;
  double tau_;
};

/// Per-label bounds lower_k <= lambda_k <= upper_k over the region.
struct ProbabilityEnvelope {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const noexcept { return lower.size(); }
};

struct ExtremePoints {
  std::vector<ProbabilityVector> vertices;

  std::size_t size() const noexcept { return vertices.size(); }
};

bool contains(const CredalRegion& region, std::span<const double> lambda);

ProbabilityEnvelope envelope(const CredalRegion& region);

/// Simplex vertices inside the region plus the points where the cutting
/// hyperplane crosses simplex edges, deduplicated.
ExtremePoints extreme_points(const CredalRegion& region);

/// All lattice points c / m (c >= 0, sum c = m) inside the region, in
/// lexicographic order of c.
std::vector<ProbabilityVector> discretize(const CredalRegion& region, std::size_t resolution);

/// Streaming variant of discretize. The visitor returns false to stop
/// early. Coordinates outside the envelope of the region are skipped without
/// a membership test; the visited sequence equals discretize() otherwise.
/// Returns false if the visitor stopped the walk.
bool for_each_lattice_member(const CredalRegion& region, std::size_t resolution,
                             const std::function<bool(std::span<const double>)>& visitor);

/// Number of lattice points C(m + K - 1, K - 1) of the full simplex.
double lattice_size(std::size_t k, std::size_t resolution);

/// m = 200 for K = 3, max(20, floor(600 / K)) otherwise.
std::size_t default_resolution(std::size_t k);

}  // namespace credal
