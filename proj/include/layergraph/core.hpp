#pragma once

// Core lp geometry of strips and layers.  A layer is the metric space
// R^n x [0,eps]^m under the lp norm of R^(n+m); "horizontal" refers to the
// unbounded R^n factor and "vertical" to the slab factor [0,eps]^m.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace layergraph {

struct Tolerance {
  double abs_tol = 1e-9;
  double rel_tol = 1e-12;
};

inline bool nearly_equal(double a, double b, const Tolerance& tol = {}) {
  return std::abs(a - b) <= tol.abs_tol + tol.rel_tol * std::max(std::abs(a), std::abs(b));
}

struct LayerSpec {
  int n = 1;       // horizontal dimension
  int m = 1;       // vertical dimension
  double p = 2.0;  // norm exponent; 1 and +inf accepted for raw norms only
  double eps = 1.0;

  LayerSpec() = default;
  LayerSpec(int n_, int m_, double p_, double eps_) : n(n_), m(m_), p(p_), eps(eps_) {
    if (n < 1 || m < 1) throw std::invalid_argument("LayerSpec: n and m must be >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("LayerSpec: eps must be positive");
    if (std::isnan(p) || p < 1.0) throw std::invalid_argument("LayerSpec: p must satisfy p >= 1");
  }

  [[nodiscard]] int dim() const { return n + m; }
  [[nodiscard]] bool smooth_norm() const { return p > 1.0 && std::isfinite(p); }
  void require_smooth(const char* where) const {
    if (!smooth_norm())
      throw std::invalid_argument(std::string(where) +
                                  ": requires p in (1, +inf); got a non-smooth norm");
  }
  [[nodiscard]] bool is_strip() const { return n == 1 && m == 1 && p == 2.0; }
};

inline LayerSpec strip_spec(double eps) { return LayerSpec(1, 1, 2.0, eps); }

struct LayerPoint {
  std::vector<double> h;  // horizontal coordinates, length n
  std::vector<double> v;  // vertical coordinates, length m, each in [0, eps]
};

inline LayerPoint make_point(std::vector<double> h, std::vector<double> v) {
  return LayerPoint{std::move(h), std::move(v)};
}

// Planar strip convenience: (x, y) with y the vertical coordinate.
inline LayerPoint strip_point(double x, double y) { return LayerPoint{{x}, {y}}; }

inline void check_dims(const LayerPoint& a, const LayerSpec& spec, const char* where) {
  if (static_cast<int>(a.h.size()) != spec.n || static_cast<int>(a.v.size()) != spec.m)
    throw std::invalid_argument(std::string(where) + ": point dimensions do not match layer");
}

inline std::vector<double> flatten(const LayerPoint& a) {
  std::vector<double> out;
  out.reserve(a.h.size() + a.v.size());
  out.insert(out.end(), a.h.begin(), a.h.end());
  out.insert(out.end(), a.v.begin(), a.v.end());
  return out;
}

inline LayerPoint unflatten(std::span<const double> flat, const LayerSpec& spec) {
  if (static_cast<int>(flat.size()) != spec.dim())
    throw std::invalid_argument("unflatten: wrong coordinate count");
  LayerPoint out;
  out.h.assign(flat.begin(), flat.begin() + spec.n);
  out.v.assign(flat.begin() + spec.n, flat.end());
  return out;
}

// lp norm; p = 1 and p = +inf are evaluated directly.
inline double lp_norm(std::span<const double> x, double p) {
  if (std::isinf(p)) {
    double best = 0.0;
    for (double c : x) best = std::max(best, std::abs(c));
    return best;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (double c : x) s += std::abs(c);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
  }
  double s = 0.0;
  for (double c : x) s += std::pow(std::abs(c), p);
  return std::pow(s, 1.0 / p);
}

inline double lp_norm_pow(std::span<const double> x, double p) {
  // sum of |x_i|^p, without the final root
  if (p == 2.0) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return s;
  }
  double s = 0.0;
  for (double c : x) s += std::pow(std::abs(c), p);
  return s;
}

inline double lp_dist(const LayerPoint& a, const LayerPoint& b, const LayerSpec& spec) {
  check_dims(a, spec, "lp_dist");
  check_dims(b, spec, "lp_dist");
  std::vector<double> diff(spec.dim());
  for (int i = 0; i < spec.n; ++i) diff[i] = a.h[i] - b.h[i];
  for (int j = 0; j < spec.m; ++j) diff[spec.n + j] = a.v[j] - b.v[j];
  return lp_norm(diff, spec.p);
}

inline std::vector<double> project(const LayerPoint& a) { return a.h; }

inline bool in_layer(std::span<const double> coords, const LayerSpec& spec,
                     const Tolerance& tol = {}) {
  if (static_cast<int>(coords.size()) != spec.dim())
    throw std::invalid_argument("in_layer: wrong coordinate count");
  for (int j = 0; j < spec.m; ++j) {
    const double y = coords[spec.n + j];
    if (y < -tol.abs_tol || y > spec.eps + tol.abs_tol) return false;
  }
  return true;
}

inline bool in_layer(const LayerPoint& a, const LayerSpec& spec, const Tolerance& tol = {}) {
  check_dims(a, spec, "in_layer");
  for (double y : a.v)
    if (y < -tol.abs_tol || y > spec.eps + tol.abs_tol) return false;
  return true;
}

// Diameter m^(1/p) of the unit cube [0,1]^m under lp.
inline double cube_diameter(int m, double p) {
  if (m < 1) throw std::invalid_argument("cube_diameter: m must be >= 1");
  if (!(p > 1.0) || std::isinf(p))
    throw std::invalid_argument("cube_diameter: requires p in (1, +inf)");
  return std::pow(static_cast<double>(m), 1.0 / p);
}

struct SupportNormal {
  std::vector<double> u;  // lp unit vector, horizontal (length n + m, vertical part zero)
  std::vector<double> s;  // Euclidean normal of the supporting hyperplane at u
};

// Supporting hyperplane normal of the lp unit ball at a horizontal boundary
// point u: s_i = sign(u_i) * |u_i|^(p-1) on horizontal coordinates, 0 on
// vertical ones.  Unique because the norm is smooth for p in (1, inf).
inline SupportNormal support_normal(std::span<const double> u, const LayerSpec& spec,
                                    const Tolerance& tol = {}) {
  spec.require_smooth("support_normal");
  std::vector<double> full(spec.dim(), 0.0);
  if (static_cast<int>(u.size()) == spec.n) {
    std::copy(u.begin(), u.end(), full.begin());
  } else if (static_cast<int>(u.size()) == spec.dim()) {
    std::copy(u.begin(), u.end(), full.begin());
    for (int j = 0; j < spec.m; ++j)
      if (std::abs(full[spec.n + j]) > tol.abs_tol)
        throw std::invalid_argument("support_normal: u must be horizontal");
  } else {
    throw std::invalid_argument("support_normal: wrong vector length");
  }
  const double norm = lp_norm(full, spec.p);
  if (!nearly_equal(norm, 1.0, Tolerance{1e-7, 1e-9}))
    throw std::invalid_argument("support_normal: u must lie on the lp unit sphere");
  std::vector<double> s(spec.dim(), 0.0);
  for (int i = 0; i < spec.n; ++i) {
    const double c = full[i];
    if (c != 0.0) s[i] = (c > 0 ? 1.0 : -1.0) * std::pow(std::abs(c), spec.p - 1.0);
  }
  return SupportNormal{std::move(full), std::move(s)};
}

// Gradient direction of the lp norm at a general (not necessarily horizontal,
// not necessarily unit) vector; used for first-order distance expansions.
inline std::vector<double> lp_gradient(std::span<const double> x, double p) {
  const double norm = lp_norm(x, p);
  std::vector<double> g(x.size(), 0.0);
  if (norm == 0.0) return g;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = x[i];
    if (c != 0.0)
      g[i] = (c > 0 ? 1.0 : -1.0) * std::pow(std::abs(c) / norm, p - 1.0);
  }
  return g;
}

// x = x_0, x_1, ..., x_k = y equally spaced on the segment [x, y].  Requires
// lp_dist(x, y) to be an integer k within tolerance; convexity of the layer
// keeps every chain point inside it.
inline std::vector<LayerPoint> chain_points(const LayerPoint& x, const LayerPoint& y, int k,
                                            const LayerSpec& spec, const Tolerance& tol = {}) {
  if (k < 1) throw std::invalid_argument("chain_points: k must be >= 1");
  const double d = lp_dist(x, y, spec);
  if (std::abs(d - static_cast<double>(k)) > tol.abs_tol)
    throw std::invalid_argument("chain_points: lp distance is not the requested integer");
  std::vector<LayerPoint> pts;
  pts.reserve(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(k);
    LayerPoint q;
    q.h.resize(x.h.size());
    q.v.resize(x.v.size());
    for (std::size_t c = 0; c < x.h.size(); ++c) q.h[c] = x.h[c] + t * (y.h[c] - x.h[c]);
    for (std::size_t c = 0; c < x.v.size(); ++c) q.v[c] = x.v[c] + t * (y.v[c] - x.v[c]);
    pts.push_back(std::move(q));
  }
  pts.front() = x;
  pts.back() = y;
  return pts;
}

// Strict containment of q in the interior of the simplex spanned by n+1
// points, via barycentric coordinates.  Degenerate simplices report false.
inline bool hull_interior_contains(const std::vector<std::vector<double>>& points,
                                   std::span<const double> q, const Tolerance& tol = {}) {
  const std::size_t n = q.size();
  if (points.size() != n + 1)
    throw std::invalid_argument("hull_interior_contains: need exactly n+1 points");
  for (const auto& pt : points)
    if (pt.size() != n)
      throw std::invalid_argument("hull_interior_contains: point of wrong dimension");

  // Solve [P^T; 1] lambda = [q; 1] by Gaussian elimination with partial pivot.
  const std::size_t rows = n + 1;
  std::vector<std::vector<double>> a(rows, std::vector<double>(rows + 1, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < rows; ++c) a[r][c] = points[c][r];
    a[r][rows] = q[r];
  }
  for (std::size_t c = 0; c < rows; ++c) a[n][c] = 1.0;
  a[n][rows] = 1.0;

  double scale = 1.0;
  for (const auto& pt : points)
    for (double c : pt) scale = std::max(scale, std::abs(c));

  for (std::size_t col = 0; col < rows; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < rows; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-12 * scale) return false;  // degenerate hull
    std::swap(a[col], a[pivot]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= rows; ++c) a[r][c] -= f * a[col][c];
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const double lambda = a[r][rows] / a[r][r];
    if (!(lambda > tol.abs_tol)) return false;
  }
  return true;
}

enum class EquidistantKind { TwoPoints, UniqueMidpoint, None };

struct EquidistantResult {
  EquidistantKind kind = EquidistantKind::None;
  LayerPoint z1;  // UniqueMidpoint: the midpoint; TwoPoints: first witness
  LayerPoint z2;  // TwoPoints: second witness
};

namespace detail {

// Distance difference f(t) = ||q(t) - xh|| - ||q(t) - yh|| along a line
// parallel to xh - yh is monotone; returns the root (the lp bisector point).
inline std::vector<double> bisector_on_line(const std::vector<double>& base,
                                            const std::vector<double>& dir,
                                            const std::vector<double>& xh,
                                            const std::vector<double>& yh, double p) {
  const std::size_t n = base.size();
  auto eval = [&](double t) {
    std::vector<double> dx(n), dy(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double q = base[i] + t * dir[i];
      dx[i] = q - xh[i];
      dy[i] = q - yh[i];
    }
    return lp_norm(dx, p) - lp_norm(dy, p);
  };
  double lo = -1.0, hi = 1.0;
  double flo = eval(lo), fhi = eval(hi);
  int guard = 0;
  while (flo * fhi > 0.0 && guard++ < 80) {
    lo *= 2.0;
    hi *= 2.0;
    flo = eval(lo);
    fhi = eval(hi);
  }
  if (flo * fhi > 0.0) throw std::runtime_error("bisector_on_line: failed to bracket");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = eval(mid);
    if ((fm <= 0.0) == (flo <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double t = 0.5 * (lo + hi);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = base[i] + t * dir[i];
  return out;
}

}  // namespace detail

// Equidistant companions at unit distance.  For ||x-y|| = 2 there is exactly
// one such point (the midpoint); for larger distances none; for smaller
// distances two, one on each side of the segment, located on the lp bisector
// curve inside a horizontal 2-plane through the midpoint.  For p != 2 that
// curve is not the straight Euclid-orthogonal line, so each candidate is a
// nested root solve: an inner bisection finds the equidistant locus, an outer
// bisection drives the common distance to 1.
inline EquidistantResult unit_equidistant_pair(const LayerPoint& x, const LayerPoint& y,
                                               const LayerSpec& spec, const Tolerance& tol = {}) {
  spec.require_smooth("unit_equidistant_pair");
  check_dims(x, spec, "unit_equidistant_pair");
  check_dims(y, spec, "unit_equidistant_pair");
  const double d = lp_dist(x, y, spec);
  if (d <= tol.abs_tol) throw std::invalid_argument("unit_equidistant_pair: x and y coincide");

  LayerPoint mid;
  mid.h.resize(spec.n);
  mid.v.resize(spec.m);
  for (int i = 0; i < spec.n; ++i) mid.h[i] = 0.5 * (x.h[i] + y.h[i]);
  for (int j = 0; j < spec.m; ++j) mid.v[j] = 0.5 * (x.v[j] + y.v[j]);

  EquidistantResult out;
  if (std::abs(d - 2.0) <= tol.abs_tol) {
    out.kind = EquidistantKind::UniqueMidpoint;
    out.z1 = mid;
    return out;
  }
  if (d > 2.0) {
    out.kind = EquidistantKind::None;
    return out;
  }
  if (spec.n < 2)
    throw std::invalid_argument("unit_equidistant_pair: requires a horizontal 2-plane (n >= 2)");

  std::vector<double> dh(spec.n);
  for (int i = 0; i < spec.n; ++i) dh[i] = x.h[i] - y.h[i];
  double dh_norm2 = 0.0;
  for (double c : dh) dh_norm2 += c * c;

  // Transverse horizontal direction: least-aligned coordinate axis,
  // Gram-Schmidt against dh (Euclidean).
  std::vector<double> w(spec.n, 0.0);
  if (dh_norm2 < 1e-30) {
    w[0] = 1.0;
  } else {
    int axis = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < spec.n; ++i) {
      const double align = std::abs(dh[i]);
      if (align < best) {
        best = align;
        axis = i;
      }
    }
    w[axis] = 1.0;
    const double proj = dh[axis] / dh_norm2;
    for (int i = 0; i < spec.n; ++i) w[i] -= proj * dh[i];
    double wn = 0.0;
    for (double c : w) wn += c * c;
    wn = std::sqrt(wn);
    for (double& c : w) c /= wn;
  }

  // Distance from the bisector point at transverse offset s to x (== to y).
  auto witness_at = [&](double s) {
    std::vector<double> base(spec.n);
    for (int i = 0; i < spec.n; ++i) base[i] = mid.h[i] + s * w[i];
    std::vector<double> bh;
    if (dh_norm2 < 1e-30) {
      bh = base;  // vertical pair: the whole horizontal plane is equidistant
    } else {
      std::vector<double> dir(spec.n);
      const double dn = std::sqrt(dh_norm2);
      for (int i = 0; i < spec.n; ++i) dir[i] = dh[i] / dn;
      bh = detail::bisector_on_line(base, dir, x.h, y.h, spec.p);
    }
    LayerPoint z;
    z.h = std::move(bh);
    z.v = mid.v;
    return z;
  };
  auto dist_at = [&](double s) { return lp_dist(witness_at(s), x, spec); };

  auto solve_side = [&](double sign) {
    double lo = 0.0, hi = sign;
    int guard = 0;
    while (dist_at(hi) < 1.0 && guard++ < 80) hi *= 2.0;
    if (dist_at(hi) < 1.0)
      throw std::runtime_error("unit_equidistant_pair: failed to bracket unit distance");
    for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-15 * (1.0 + std::abs(hi)); ++it) {
      const double mid_s = 0.5 * (lo + hi);
      if (dist_at(mid_s) < 1.0)
        lo = mid_s;
      else
        hi = mid_s;
    }
    return witness_at(0.5 * (lo + hi));
  };

  out.kind = EquidistantKind::TwoPoints;
  out.z1 = solve_side(+1.0);
  out.z2 = solve_side(-1.0);
  return out;
}

}  // namespace layergraph
