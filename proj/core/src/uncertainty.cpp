#include "credal/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "credal/error.hpp"

namespace credal {

namespace {

constexpr double kLogFloor = 1e-300;
constexpr std::size_t kStallWindow = 200;

double inv_ln2() { return 1.0 / std::numbers::ln2; }

void entropy_gradient(std::span<const double> x, std::vector<double>& grad) {
  grad.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    grad[k] = -std::log2(std::max(x[k], kLogFloor)) - inv_ln2();
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

/// Derivative of H(x + gamma d) in gamma; sum d = 0 drops the constant.
double directional_slope(std::span<const double> x, std::span<const double> d, double gamma) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (d[k] == 0.0) continue;
    const double v = x[k] + gamma * d[k];
    if (v <= 0.0) return d[k] < 0.0 ? -std::numeric_limits<double>::infinity()
                                    : std::numeric_limits<double>::infinity();
    s -= d[k] * std::log2(v);
  }
  return s;
}

/// argmax over [0, gamma_max] of the concave H(x + gamma d) by bisection on
/// the slope.
double line_search(std::span<const double> x, std::span<const double> d, double gamma_max) {
  if (directional_slope(x, d, gamma_max) >= 0.0) return gamma_max;
  double lo = 0.0;
  double hi = gamma_max;
  for (int i = 0; i < 200 && hi - lo > 1e-18; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (directional_slope(x, d, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Max over vertices of g . (v - x): the Frank-Wolfe gap at x.
double fw_gap(std::span<const double> x, const std::vector<std::vector<double>>& verts,
              std::vector<double>& grad) {
  entropy_gradient(x, grad);
  const double gx = dot(grad, x);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : verts) best = std::max(best, dot(grad, v) - gx);
  return std::max(best, 0.0);
}

}  // namespace

EntropyWitness lower_entropy(const CredalRegion& region) {
  const auto ext = extreme_points(region);
  std::size_t best = 0;
  double best_h = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < ext.size(); ++s) {
    const double h = shannon_entropy(ext.vertices[s]);
    if (h < best_h) {
      best_h = h;
      best = s;
    }
  }
  return {best_h, ext.vertices[best]};
}

EntropyAscent upper_entropy(const CredalRegion& region, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  const std::size_t k_count = region.size();
  const auto uniform = ProbabilityVector::uniform(k_count);
  if (region.contains(uniform)) {
    return {std::log2(static_cast<double>(k_count)), uniform, 0, 0.0, false, false};
  }

  const auto ext = extreme_points(region);
  std::vector<std::vector<double>> verts;
  verts.reserve(ext.size());
  for (const auto& v : ext.vertices) verts.emplace_back(v.begin(), v.end());
  const std::size_t n_verts = verts.size();

  if (n_verts == 1) {
    return {shannon_entropy(ext.vertices[0]), ext.vertices[0], 0, 0.0, true, false};
  }

  // Active-set weights over the vertices; start from the centroid.
  std::vector<double> weight(n_verts, 1.0 / static_cast<double>(n_verts));
  std::vector<double> x(k_count, 0.0);
  auto rebuild_point = [&] {
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t s = 0; s < n_verts; ++s) {
      if (weight[s] == 0.0) continue;
      for (std::size_t k = 0; k < k_count; ++k) x[k] += weight[s] * verts[s][k];
    }
  };
  rebuild_point();

  std::vector<double> grad;
  std::vector<double> dir(k_count);
  double gap = std::numeric_limits<double>::infinity();
  double best_h = shannon_entropy(x);
  std::size_t since_improvement = 0;
  std::size_t iter = 0;
  bool stalled = false;

  for (; iter < kAscentIterationCap; ++iter) {
    entropy_gradient(x, grad);
    const double gx = dot(grad, x);
    std::size_t fw = 0;
    double fw_score = -std::numeric_limits<double>::infinity();
    std::size_t away = n_verts;
    double away_score = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n_verts; ++s) {
      const double gs = dot(grad, verts[s]);
      if (gs > fw_score) {
        fw_score = gs;
        fw = s;
      }
      if (weight[s] > 0.0 && gs < away_score) {
        away_score = gs;
        away = s;
      }
    }
    gap = std::max(fw_score - gx, 0.0);
    if (gap < tol) break;

    const double away_gap = gx - away_score;
    const bool toward = away == n_verts || gap >= away_gap;
    double gamma_max = 1.0;
    if (toward) {
      for (std::size_t k = 0; k < k_count; ++k) dir[k] = verts[fw][k] - x[k];
    } else {
      for (std::size_t k = 0; k < k_count; ++k) dir[k] = x[k] - verts[away][k];
      gamma_max = weight[away] / (1.0 - weight[away]);
    }
    const double gamma = line_search(x, dir, gamma_max);

    if (toward) {
      for (auto& w : weight) w *= (1.0 - gamma);
      weight[fw] += gamma;
      if (gamma >= 1.0) {
        std::fill(weight.begin(), weight.end(), 0.0);
        weight[fw] = 1.0;
      }
    } else {
      for (auto& w : weight) w *= (1.0 + gamma);
      weight[away] -= gamma;
      if (gamma >= gamma_max || weight[away] < 1e-300) weight[away] = 0.0;
    }
    double total = 0.0;
    for (double w : weight) total += w;
    for (auto& w : weight) w /= total;
    rebuild_point();

    const double h = shannon_entropy(x);
    if (h > best_h + 1e-16) {
      best_h = h;
      since_improvement = 0;
    } else if (++since_improvement >= kStallWindow) {
      stalled = true;
      break;
    }
  }

  EntropyAscent out{shannon_entropy(x), ProbabilityVector::from(x), iter, gap, true, false};
  if (stalled || gap >= tol) {
    out.used_lattice_fallback = true;
    std::vector<double> best_lattice;
    double best_lattice_h = out.bits;
    for_each_lattice_member(region, default_resolution(k_count), [&](std::span<const double> p) {
      const double h = shannon_entropy(p);
      if (h > best_lattice_h) {
        best_lattice_h = h;
        best_lattice.assign(p.begin(), p.end());
      }
      return true;
    });
    if (!best_lattice.empty()) {
      out.bits = best_lattice_h;
      out.point = ProbabilityVector::from(best_lattice);
      out.duality_gap = fw_gap(best_lattice, verts, grad);
    } else {
      out.duality_gap = fw_gap(x, verts, grad);
    }
  }
  return out;
}

UncertaintyReport decompose(const CredalRegion& region, bool with_appendix_bounds) {
  const auto low = lower_entropy(region);
  const auto high = upper_entropy(region);
  UncertaintyReport report{low.bits,
                           high.bits,
                           high.bits - low.bits,
                           low.point,
                           high.point,
                           high.iterations,
                           high.duality_gap,
                           high.used_ascent,
                           std::nullopt};
  if (with_appendix_bounds) report.appendix_bounds = appendix_b_bounds(extreme_points(region));
  return report;
}

AppendixBounds appendix_b_bounds(const ExtremePoints& vertices) {
  if (vertices.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "appendix bounds need at least one vertex");
  }
  double h_min = std::numeric_limits<double>::infinity();
  double h_max = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices.vertices) {
    const double h = shannon_entropy(v);
    h_min = std::min(h_min, h);
    h_max = std::max(h_max, h);
  }
  AppendixBounds b;
  b.s_count = vertices.size();
  b.beta_sup = h_max;  // linear in beta: attained at a corner of the mixing simplex
  b.beta_sup_is_vertex_max = true;
  const double log_s = std::log2(static_cast<double>(b.s_count));
  b.tu_lo = std::max(b.beta_sup, h_max);
  b.tu_hi = b.beta_sup + log_s;
  b.au_point = h_min;
  b.eu_lo = std::max(0.0, b.tu_lo - h_min);
  b.eu_hi = b.beta_sup + log_s - h_min;
  return b;
}

}  // namespace credal
