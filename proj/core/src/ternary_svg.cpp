#include "credal/ternary_svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "credal/error.hpp"
#include "credal/json_writer.hpp"

namespace credal {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // Avoid "-0.000000" so identical geometry prints identically.
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void require_ternary(std::size_t k) {
  if (k != 3) {
    throw Error(ErrorCode::UnsupportedDimension,
                "ternary plots need exactly 3 labels, got " + std::to_string(k));
  }
}

}  // namespace

CanvasPoint barycentric_to_canvas(std::span<const double> lambda, const TernaryStyle& style) {
  require_ternary(lambda.size());
  const double h = style.side * std::sqrt(3.0) / 2.0;
  const CanvasPoint corners[3] = {
      {style.margin, style.margin + h},
      {style.margin + style.side, style.margin + h},
      {style.margin + style.side / 2.0, style.margin},
  };
  CanvasPoint p;
  for (std::size_t k = 0; k < 3; ++k) {
    p.x += lambda[k] * corners[k].x;
    p.y += lambda[k] * corners[k].y;
  }
  return p;
}

std::vector<CanvasPoint> region_polygon(const CredalRegion& region, const TernaryStyle& style) {
  require_ternary(region.size());
  const auto ext = extreme_points(region);
  std::vector<CanvasPoint> pts;
  pts.reserve(ext.size());
  for (const auto& v : ext.vertices) pts.push_back(barycentric_to_canvas(v.values(), style));
  if (pts.size() < 3) return pts;

  CanvasPoint c;
  for (const auto& p : pts) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<double>(pts.size());
  c.y /= static_cast<double>(pts.size());
  // The canvas y axis points down, so negate it to get counter-clockwise
  // order as seen on screen.
  std::stable_sort(pts.begin(), pts.end(), [&](const CanvasPoint& a, const CanvasPoint& b) {
    return std::atan2(-(a.y - c.y), a.x - c.x) < std::atan2(-(b.y - c.y), b.x - c.x);
  });
  return pts;
}

std::string render_ternary(const TernaryPlot& plot) {
  if (plot.region == nullptr) throw Error(ErrorCode::InvalidArgument, "plot has no region");
  const auto& region = *plot.region;
  require_ternary(region.size());
  if (plot.labels && plot.labels->size() != 3) require_ternary(plot.labels->size());
  if (plot.lambda) require_ternary(plot.lambda->size());

  const auto& st = plot.style;
  const double width = st.side + 2.0 * st.margin;
  const double height = st.side * std::sqrt(3.0) / 2.0 + 2.0 * st.margin;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
         fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
  svg += "  <metadata>barycentric: label 0 bottom-left, label 1 bottom-right, label 2 top; tau=" +
         format_double(region.tau()) + "</metadata>\n";
  if (!plot.title.empty()) svg += "  <title>" + xml_escape(plot.title) + "</title>\n";

  CanvasPoint corners[3];
  for (std::size_t k = 0; k < 3; ++k) {
    corners[k] = barycentric_to_canvas(ProbabilityVector::one_hot(3, k).values(), st);
  }
  svg += "  <polygon class=\"simplex\" points=\"";
  for (std::size_t k = 0; k < 3; ++k) {
    if (k) svg += ' ';
    svg += fmt(corners[k].x) + "," + fmt(corners[k].y);
  }
  svg += "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";

  const auto poly = region_polygon(region, st);
  if (poly.size() == 1) {
    svg += "  <circle class=\"region degenerate\" cx=\"" + fmt(poly[0].x) + "\" cy=\"" +
           fmt(poly[0].y) + "\" r=\"3.000000\" fill=\"#e8892b\"/>\n";
  } else if (poly.size() == 2) {
    svg += "  <line class=\"region degenerate\" x1=\"" + fmt(poly[0].x) + "\" y1=\"" +
           fmt(poly[0].y) + "\" x2=\"" + fmt(poly[1].x) + "\" y2=\"" + fmt(poly[1].y) +
           "\" stroke=\"#e8892b\" stroke-width=\"3\"/>\n";
  } else {
    svg += "  <polygon class=\"region\" points=\"";
    for (std::size_t i = 0; i < poly.size(); ++i) {
      if (i) svg += ' ';
      svg += fmt(poly[i].x) + "," + fmt(poly[i].y);
    }
    svg += "\" fill=\"#e8892b\" fill-opacity=\"0.55\" stroke=\"#b35f12\" stroke-width=\"1\"/>\n";
  }

  if (plot.lambda) {
    const auto p = barycentric_to_canvas(plot.lambda->values(), st);
    svg += "  <circle class=\"lambda\" cx=\"" + fmt(p.x) + "\" cy=\"" + fmt(p.y) +
           "\" r=\"4.000000\" fill=\"#1f5fa8\"/>\n";
  }

  const CanvasPoint offsets[3] = {{-10.0, 20.0}, {10.0, 20.0}, {0.0, -12.0}};
  const char* anchors[3] = {"end", "start", "middle"};
  for (std::size_t k = 0; k < 3; ++k) {
    const std::string name = plot.labels ? plot.labels->display_name(k) : std::to_string(k + 1);
    svg += "  <text x=\"" + fmt(corners[k].x + offsets[k].x) + "\" y=\"" +
           fmt(corners[k].y + offsets[k].y) + "\" text-anchor=\"" + anchors[k] +
           "\" font-family=\"sans-serif\" font-size=\"14\">" + xml_escape(name) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace credal
