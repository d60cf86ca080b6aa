#pragma once

// SVG ternary plots of credal regions over three labels.
//
// Barycentric-to-canvas convention: label 0 at the bottom-left corner,
// label 1 at the bottom-right, label 2 at the top.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "credal/credal_region.hpp"
#include "credal/label_simplex.hpp"

namespace credal {

struct CanvasPoint {
  double x = 0.0;
  double y = 0.0;
};

struct TernaryStyle {
  double side = 400.0;
  double margin = 48.0;
};

CanvasPoint barycentric_to_canvas(std::span<const double> lambda, const TernaryStyle& style = {});

/// Extreme points of the region in canvas coordinates, ordered
/// counter-clockwise around their centroid.
std::vector<CanvasPoint> region_polygon(const CredalRegion& region,
                                        const TernaryStyle& style = {});

struct TernaryPlot {
  const CredalRegion* region = nullptr;
  std::optional<ProbabilityVector> lambda;
  std::optional<LabelSpace> labels;
  std::string title;
  TernaryStyle style;
};

/// Throws UnsupportedDimension unless the region has exactly three labels.
std::string render_ternary(const TernaryPlot& plot);

}  // namespace credal
