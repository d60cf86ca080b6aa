#include "credal/credal_region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "credal/error.hpp"

namespace credal {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double max_score(const ConformityScores& scores) {
  return *std::max_element(scores.per_label.begin(), scores.per_label.end());
}

/// max_{j != k} E_j for every k.
std::vector<double> best_other_scores(const ConformityScores& scores) {
  const std::size_t k_count = scores.size();
  std::size_t first = 0;
  for (std::size_t k = 1; k < k_count; ++k) {
    if (scores[k] > scores[first]) first = k;
  }
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < k_count; ++k) {
    if (k != first) second = std::max(second, scores[k]);
  }
  std::vector<double> out(k_count, scores[first]);
  out[first] = second;
  return out;
}

}  // namespace

CredalRegion::CredalRegion(ConformityScores scores, double tau)
    : scores_(std::move(scores)), tau_(tau) {
  if (scores_.size() < 2) throw Error(ErrorCode::InvalidArgument, "region needs K >= 2");
  if (scores_.size() > kMaxLabels) {
    throw Error(ErrorCode::LabelSpaceTooLarge, "region wider than 64 labels");
  }
  for (double e : scores_.per_label) {
    if (!std::isfinite(e)) throw Error(ErrorCode::InvalidArgument, "conformity scores must be finite");
  }
  if (std::isnan(tau_) || tau_ == std::numeric_limits<double>::infinity()) {
    throw Error(ErrorCode::InvalidArgument, "tau must be a real number or -inf");
  }
  if (!feasible(scores_, tau_)) {
    throw Error(ErrorCode::EmptyRegion, "max conformity score is below tau");
  }
}

bool CredalRegion::feasible(const ConformityScores& scores, double tau) {
  if (scores.size() == 0) return false;
  return max_score(scores) >= tau - kMembershipTol;
}

bool CredalRegion::vacuous() const noexcept {
  return tau_ == -std::numeric_limits<double>::infinity();
}

bool CredalRegion::contains(std::span<const double> lambda) const {
  const double e = plausibility_score(scores_, lambda);
  return e >= tau_ - kMembershipTol;
}

bool CredalRegion::contains_vertex(std::size_t k) const {
  return scores_[k] >= tau_ - kMembershipTol;
}

bool contains(const CredalRegion& region, std::span<const double> lambda) {
  return region.contains(lambda);
}

ProbabilityEnvelope envelope(const CredalRegion& region) {
  const auto& scores = region.scores();
  const double tau = region.tau();
  const std::size_t k_count = region.size();
  const auto best_other = best_other_scores(scores);

  ProbabilityEnvelope env{std::vector<double>(k_count, 0.0), std::vector<double>(k_count, 0.0)};
  for (std::size_t k = 0; k < k_count; ++k) {
    const double ek = scores[k];
    const double eo = best_other[k];
    if (region.contains_vertex(k)) {
      env.upper[k] = 1.0;
    } else if (eo > ek) {
      env.upper[k] = clamp01((eo - tau) / (eo - ek));
    }
    if (eo >= tau - kMembershipTol) {
      env.lower[k] = 0.0;
    } else {
      env.lower[k] = clamp01((tau - eo) / (ek - eo));
    }
  }
  return env;
}

ExtremePoints extreme_points(const CredalRegion& region) {
  const auto& scores = region.scores();
  const double tau = region.tau();
  const std::size_t k_count = region.size();

  std::vector<std::vector<double>> raw;
  for (std::size_t j = 0; j < k_count; ++j) {
    if (!region.contains_vertex(j)) continue;
    std::vector<double> v(k_count, 0.0);
    v[j] = 1.0;
    raw.push_back(std::move(v));
  }
  for (std::size_t j = 0; j < k_count; ++j) {
    if (!region.contains_vertex(j)) continue;
    for (std::size_t k = 0; k < k_count; ++k) {
      if (region.contains_vertex(k)) continue;
      const double t = clamp01((tau - scores[k]) / (scores[j] - scores[k]));
      std::vector<double> v(k_count, 0.0);
      v[j] = t;
      v[k] = 1.0 - t;
      raw.push_back(std::move(v));
    }
  }

  ExtremePoints out;
  std::vector<std::vector<double>> kept;
  for (auto& v : raw) {
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const auto& w) {
      double diff = 0.0;
      for (std::size_t i = 0; i < k_count; ++i) diff = std::max(diff, std::abs(v[i] - w[i]));
      return diff <= kVertexDedupTol;
    });
    if (!duplicate) kept.push_back(std::move(v));
  }
  out.vertices.reserve(kept.size());
  for (auto& v : kept) out.vertices.push_back(ProbabilityVector::from(std::move(v)));
  return out;
}

namespace {

struct LatticeWalk {
  const CredalRegion& region;
  std::size_t m;
  std::vector<long> lo;
  std::vector<long> hi;
  std::vector<long> counts;
  std::vector<double> point;
  const std::function<bool(std::span<const double>)>& visitor;

  // Returns false when the visitor asked to stop.
  bool descend(std::size_t coord, long remaining) {
    const std::size_t last = counts.size() - 1;
    if (coord == last) {
      if (remaining < lo[last] || remaining > hi[last]) return true;
      counts[last] = remaining;
      point[last] = static_cast<double>(remaining) / static_cast<double>(m);
      if (!region.contains(point)) return true;
      return visitor(point);
    }
    const long top = std::min(hi[coord], remaining);
    for (long c = lo[coord]; c <= top; ++c) {
      counts[coord] = c;
      point[coord] = static_cast<double>(c) / static_cast<double>(m);
      if (!descend(coord + 1, remaining - c)) return false;
    }
    return true;
  }
};

}  // namespace

bool for_each_lattice_member(const CredalRegion& region, std::size_t resolution,
                             const std::function<bool(std::span<const double>)>& visitor) {
  if (resolution == 0) throw Error(ErrorCode::InvalidArgument, "resolution must be >= 1");
  const std::size_t k_count = region.size();
  const auto m = static_cast<long>(resolution);

  // Bounds from the slightly relaxed region so that pruning never drops a
  // point accepted by the tolerant membership test.
  std::vector<long> lo(k_count, 0);
  std::vector<long> hi(k_count, m);
  if (!region.vacuous()) {
    const CredalRegion relaxed(region.scores(), region.tau() - 2.0 * kMembershipTol);
    const auto env = envelope(relaxed);
    for (std::size_t k = 0; k < k_count; ++k) {
      const double md = static_cast<double>(m);
      lo[k] = std::clamp(static_cast<long>(std::ceil(env.lower[k] * md - 1e-7)), 0L, m);
      hi[k] = std::clamp(static_cast<long>(std::floor(env.upper[k] * md + 1e-7)), 0L, m);
    }
  }
  LatticeWalk walk{region, resolution, std::move(lo), std::move(hi),
                   std::vector<long>(k_count, 0), std::vector<double>(k_count, 0.0), visitor};
  return walk.descend(0, m);
}

std::vector<ProbabilityVector> discretize(const CredalRegion& region, std::size_t resolution) {
  if (resolution == 0) throw Error(ErrorCode::InvalidArgument, "resolution must be >= 1");
  std::vector<ProbabilityVector> out;
  const std::size_t k_count = region.size();
  // Unpruned walk: the oracle role of this function wants the plain
  // enumerate-and-filter definition.
  std::vector<double> point(k_count, 0.0);
  const auto m = static_cast<long>(resolution);
  const std::function<void(std::size_t, long)> rec = [&](std::size_t coord, long remaining) {
    if (coord + 1 == k_count) {
      point[coord] = static_cast<double>(remaining) / static_cast<double>(m);
      if (region.contains(point)) out.push_back(ProbabilityVector::from(point));
      return;
    }
    for (long c = 0; c <= remaining; ++c) {
      point[coord] = static_cast<double>(c) / static_cast<double>(m);
      rec(coord + 1, remaining - c);
    }
  };
  rec(0, m);
  return out;
}

double lattice_size(std::size_t k, std::size_t resolution) {
  // C(m + K - 1, K - 1) in floating point; only used for reporting.
  double out = 1.0;
  for (std::size_t i = 1; i < k; ++i) {
    out *= static_cast<double>(resolution + i) / static_cast<double>(i);
  }
  return std::round(out);
}

std::size_t default_resolution(std::size_t k) {
  if (k <= 3) return 200;
  return std::max<std::size_t>(20, (200 * 3) / k);
}

}  // namespace credal
