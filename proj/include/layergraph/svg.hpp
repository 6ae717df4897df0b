#pragma once

// Standalone SVG emission for planar objects: witness paths, combs,
// sandwiches, and cycle embeddings.  100 user units per length 1, y axis
// flipped so the strip's y = 0 edge is at the bottom.  Output bytes are
// deterministic for identical inputs.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "layergraph/gadgets.hpp"
#include "layergraph/hop.hpp"

namespace layergraph {

namespace detail {

constexpr double kSvgScale = 100.0;
constexpr double kSvgMargin = 60.0;

struct SvgCanvas {
  double min_x = 0, max_x = 1, eps = 1;
  std::ostringstream body;

  [[nodiscard]] double tx(double x) const { return kSvgMargin + (x - min_x) * kSvgScale; }
  [[nodiscard]] double ty(double y) const { return kSvgMargin + (eps - y) * kSvgScale; }

  static std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }

  void line(double x1, double y1, double x2, double y2, const char* stroke, double width,
            bool dashed = false) {
    body << "  <line x1=\"" << fmt(tx(x1)) << "\" y1=\"" << fmt(ty(y1)) << "\" x2=\""
         << fmt(tx(x2)) << "\" y2=\"" << fmt(ty(y2)) << "\" stroke=\"" << stroke
         << "\" stroke-width=\"" << fmt(width) << "\"";
    if (dashed) body << " stroke-dasharray=\"8,6\"";
    body << "/>\n";
  }

  void dot(double x, double y, const char* fill, double r = 4.5) {
    body << "  <circle cx=\"" << fmt(tx(x)) << "\" cy=\"" << fmt(ty(y)) << "\" r=\"" << fmt(r)
         << "\" fill=\"" << fill << "\"/>\n";
  }

  void strip_bounds() {
    line(min_x, 0.0, max_x, 0.0, "#888888", 1.5, true);
    line(min_x, eps, max_x, eps, "#888888", 1.5, true);
  }

  [[nodiscard]] std::string finish() const {
    const double w = tx(max_x) + kSvgMargin;
    const double h = ty(0.0) + kSvgMargin;
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\""
        << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << " " << fmt(h) << "\">\n"
        << body.str() << "</svg>\n";
    return out.str();
  }
};

inline SvgCanvas canvas_for(const std::vector<LayerPoint>& pts, double eps, const char* where) {
  SvgCanvas cv;
  cv.eps = eps;
  if (pts.empty()) throw std::invalid_argument(std::string(where) + ": nothing to draw");
  double lo = pts.front().h[0], hi = lo;
  for (const auto& q : pts) {
    if (q.h.size() != 1 || q.v.size() != 1)
      throw std::invalid_argument(std::string(where) + ": only planar objects can be rendered");
    lo = std::min(lo, q.h[0]);
    hi = std::max(hi, q.h[0]);
  }
  cv.min_x = lo - 0.6;
  cv.max_x = hi + 0.6;
  return cv;
}

}  // namespace detail

inline std::string svg_witness_path(const WitnessPath& path, double eps) {
  auto cv = detail::canvas_for(path.vertices, eps, "svg_witness_path");
  cv.strip_bounds();
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
    cv.line(path.vertices[i].h[0], path.vertices[i].v[0], path.vertices[i + 1].h[0],
            path.vertices[i + 1].v[0], "#1f77b4", 2.0);
  for (const auto& q : path.vertices) cv.dot(q.h[0], q.v[0], "#111111");
  return cv.finish();
}

inline std::string svg_comb(const Comb& comb, double eps) {
  std::vector<LayerPoint> all;
  for (const auto* fam : {&comb.a, &comb.b, &comb.c})
    all.insert(all.end(), fam->begin(), fam->end());
  auto cv = detail::canvas_for(all, eps, "svg_comb");
  cv.strip_bounds();
  for (std::size_t i = 0; i + 1 < comb.a.size(); ++i)
    cv.line(comb.a[i].h[0], comb.a[i].v[0], comb.a[i + 1].h[0], comb.a[i + 1].v[0], "#555555",
            2.0);
  // Teeth: b0 c1 b1 c2 ... cM bM.
  for (std::size_t j = 0; j < comb.c.size(); ++j) {
    cv.line(comb.b[j].h[0], comb.b[j].v[0], comb.c[j].h[0], comb.c[j].v[0], "#1f77b4", 2.0);
    cv.line(comb.c[j].h[0], comb.c[j].v[0], comb.b[j + 1].h[0], comb.b[j + 1].v[0], "#1f77b4",
            2.0);
  }
  for (const auto& q : comb.a) cv.dot(q.h[0], q.v[0], "#111111");
  for (const auto& q : comb.b) cv.dot(q.h[0], q.v[0], "#2ca02c");
  for (const auto& q : comb.c) cv.dot(q.h[0], q.v[0], "#1f77b4");
  return cv.finish();
}

inline std::string svg_sandwich(const Sandwich& s, double eps) {
  const auto pts = sandwich_points(s);
  const auto border = border_points(s);
  auto cv = detail::canvas_for(pts, eps, "svg_sandwich");
  cv.strip_bounds();
  auto is_border = [&](const LayerPoint& q) {
    for (const auto& bq : border)
      if (std::abs(bq.h[0] - q.h[0]) < 1e-9 && std::abs(bq.v[0] - q.v[0]) < 1e-9) return true;
    return false;
  };
  for (const auto& q : pts) cv.dot(q.h[0], q.v[0], is_border(q) ? "#d62728" : "#111111");
  return cv.finish();
}

inline std::string svg_cycle(const CycleEmbedding& cyc, double eps) {
  auto cv = detail::canvas_for(cyc.vertices, eps, "svg_cycle");
  cv.strip_bounds();
  const std::size_t k = cyc.vertices.size();
  for (std::size_t i = 0; i < k; ++i)
    cv.line(cyc.vertices[i].h[0], cyc.vertices[i].v[0], cyc.vertices[(i + 1) % k].h[0],
            cyc.vertices[(i + 1) % k].v[0], "#9467bd", 2.0);
  for (const auto& q : cyc.vertices) cv.dot(q.h[0], q.v[0], "#111111");
  return cv.finish();
}

inline void write_svg_file(const std::string& svg, const std::string& out_path) {
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("render_svg: cannot open output file: " + out_path);
  out << svg;
}

inline void render_svg(const WitnessPath& p, double eps, const std::string& out) {
  write_svg_file(svg_witness_path(p, eps), out);
}
inline void render_svg(const Comb& c, double eps, const std::string& out) {
  write_svg_file(svg_comb(c, eps), out);
}
inline void render_svg(const Sandwich& s, double eps, const std::string& out) {
  write_svg_file(svg_sandwich(s, eps), out);
}
inline void render_svg(const CycleEmbedding& c, double eps, const std::string& out) {
  write_svg_file(svg_cycle(c, eps), out);
}

}  // namespace layergraph
