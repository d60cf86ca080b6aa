#pragma once

// Lower/upper Shannon entropy over a credal region and the additive
// decomposition TU = AU + EU.

#include <cstddef>
#include <optional>

#include "credal/credal_region.hpp"
#include "credal/label_simplex.hpp"

namespace credal {

inline constexpr double kUpperEntropyTol = 1e-7;
inline constexpr std::size_t kAscentIterationCap = 10000;

struct EntropyWitness {
  double bits = 0.0;
  ProbabilityVector point;
};

/// Result of maximizing entropy over the region.
struct EntropyAscent {
  double bits = 0.0;
  ProbabilityVector point;
  std::size_t iterations = 0;
  /// Frank-Wolfe duality gap at `point`; the true sup lies in
  /// [bits, bits + duality_gap].
  double duality_gap = 0.0;
  /// False when the uniform short-circuit answered exactly.
  bool used_ascent = false;
  /// Iteration cap or stall hit; result compared against the lattice.
  bool used_lattice_fallback = false;
};

/// Bounds that only need the extreme points. The sup over the mixing simplex
/// of sum_s beta_s H(P_s) is linear in beta and taken literally, so it equals
/// max_s H(P_s); `beta_sup_is_vertex_max` records that collapse.
struct AppendixBounds {
  double tu_lo = 0.0;
  double tu_hi = 0.0;
  double au_point = 0.0;
  double eu_lo = 0.0;
  double eu_hi = 0.0;
  std::size_t s_count = 0;
  double beta_sup = 0.0;
  bool beta_sup_is_vertex_max = true;
};

struct UncertaintyReport {
  double lower_entropy = 0.0;  // AU
  double upper_entropy = 0.0;  // TU
  double epistemic = 0.0;      // EU = TU - AU
  ProbabilityVector argmin_vertex;
  ProbabilityVector argmax_point;
  std::size_t optimizer_iterations = 0;
  double duality_gap = 0.0;
  bool used_ascent = false;
  std::optional<AppendixBounds> appendix_bounds;
};

/// Minimum entropy, attained at a vertex since entropy is concave.
EntropyWitness lower_entropy(const CredalRegion& region);

/// Maximum entropy: exact when the uniform vector is a member, otherwise an
/// away-step Frank-Wolfe ascent whose linear subproblem is solved by vertex
/// evaluation.
EntropyAscent upper_entropy(const CredalRegion& region, double tol = kUpperEntropyTol);

UncertaintyReport decompose(const CredalRegion& region, bool with_appendix_bounds = true);

AppendixBounds appendix_b_bounds(const ExtremePoints& vertices);

}  // namespace credal
