#pragma once

// Theorem-level machinery: width signatures, the explicit gadget witness
// separating two widths, ray samplers for the projection-separation
// criteria, the vertical-diagonal width detector, and the forward isometry
// sanity check.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "layergraph/core.hpp"
#include "layergraph/gadgets.hpp"
#include "layergraph/hop.hpp"
#include "layergraph/optimize.hpp"
#include "layergraph/rational.hpp"

namespace layergraph {

inline constexpr double kSeparationMargin = 1e-6;

inline WidthSignature width_signature(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("width_signature: eps must be positive");
  const double fl = std::floor(eps);
  return WidthSignature{static_cast<long long>(fl), eps - fl};
}

inline WidthSignature width_signature(const Rational& eps) {
  if (!(eps > Rational(0))) throw std::invalid_argument("width_signature: eps must be positive");
  return WidthSignature{eps.floor_ll(), eps.fractional_part().to_double()};
}

enum class WitnessKind { Equal, Sandwich, Comb, ModifiedComb };

struct DistinguishWitness {
  WitnessKind kind = WitnessKind::Equal;
  int m_s = 0;             // sandwich rows (Case I)
  int N = 0, M = 0;        // comb parameters (Cases II and III)
  double threshold = 0.0;  // numeric comb threshold
  std::string threshold_exact;
  int present_in = 0;  // 1 or 2: which input width contains the gadget
};

namespace detail {

// Smallest M (ties: smallest N) whose comb threshold falls strictly between
// the fractional widths lo < hi, with every comparison exact.
inline std::pair<int, int> scan_comb_threshold(const Rational& lo, const Rational& hi) {
  const Rational lo_sq = lo.squared();
  const Rational hi_sq = hi.squared();
  for (int M = 1; M <= 1'000'000; ++M) {
    // Estimate the smallest N with threshold(N, M) < hi, then fix up exactly.
    const double est = 2.0 * M * std::sqrt(std::max(0.0, 1.0 - hi.to_double() * hi.to_double()));
    int N = std::clamp(static_cast<int>(std::ceil(est)) - 2, 1, 2 * M - 1);
    while (N <= 2 * M - 1 && !(comb_min_width_squared(N, M) < hi_sq)) ++N;
    if (N > 2 * M - 1) continue;
    while (N - 1 >= 1 && comb_min_width_squared(N - 1, M) < hi_sq) --N;
    if (comb_min_width_squared(N, M) > lo_sq) return {N, M};
  }
  throw std::runtime_error("distinguish: no comb threshold found between the widths");
}

}  // namespace detail

// Explicit gadget separating two strip widths: different integer parts are
// told apart by a sandwich, widths below 1 by a comb whose threshold lies
// strictly between them, and equal integer parts by the modified comb on the
// fractional parts.
inline DistinguishWitness distinguish(const Rational& eps1, const Rational& eps2) {
  if (!(eps1 > Rational(0)) || !(eps2 > Rational(0)))
    throw std::invalid_argument("distinguish: widths must be positive");
  DistinguishWitness out;
  if (eps1 == eps2) {
    out.kind = WitnessKind::Equal;
    return out;
  }
  const BigInt m1 = eps1.floor_big(), m2 = eps2.floor_big();
  if (m1 != m2) {
    out.kind = WitnessKind::Sandwich;
    const BigInt ms = m1 > m2 ? m1 : m2;
    out.m_s = ms.convert_to<int>();
    out.present_in = (m1 > m2) ? 1 : 2;
    return out;
  }
  const Rational f1 = eps1.fractional_part();
  const Rational f2 = eps2.fractional_part();
  const Rational lo = f1 < f2 ? f1 : f2;
  const Rational hi = f1 < f2 ? f2 : f1;
  const auto [N, M] = detail::scan_comb_threshold(lo, hi);
  out.kind = (m1 == 0) ? WitnessKind::Comb : WitnessKind::ModifiedComb;
  out.N = N;
  out.M = M;
  out.threshold = comb_min_width(N, M);
  out.threshold_exact = comb_threshold_string(N, M);
  out.present_in = (f1 > f2) ? 1 : 2;
  return out;
}

inline DistinguishWitness distinguish(double eps1, double eps2) {
  return distinguish(Rational::from_double(eps1), Rational::from_double(eps2));
}

// ---------------------------------------------------------------------------
// Projection-separation criteria on rays.

inline void require_distinct(const LayerPoint& a, const LayerPoint& b, const LayerSpec& spec,
                             const char* where) {
  if (lp_dist(a, b, spec) <= 1e-12)
    throw std::invalid_argument(std::string(where) + ": points must be distinct");
}

// Planar separation criterion: the projections of x1 and x2 differ and the
// projection of y lies strictly between them.
inline bool omega_check(const LayerPoint& x1, const LayerPoint& x2, const LayerPoint& y,
                        const LayerSpec& spec, double margin = kSeparationMargin) {
  if (spec.n != 1) throw std::invalid_argument("omega_check: planar strips only");
  require_distinct(x1, x2, spec, "omega_check");
  require_distinct(x1, y, spec, "omega_check");
  require_distinct(x2, y, spec, "omega_check");
  const double p1 = x1.h[0], p2 = x2.h[0], py = y.h[0];
  if (std::abs(p1 - p2) <= margin) return false;
  return py > std::min(p1, p2) + margin && py < std::max(p1, p2) - margin;
}

namespace detail {

// Confirms on the graph side that some x_k overtakes y along the ray
// direction: at a radius whose fractional part is aligned with the
// projection gap, the hop-distance ceilings separate strictly.  The radius
// escalates until the first-order gap dominates curvature terms.
inline bool confirm_separation_on_ray(const std::vector<LayerPoint>& xs, const LayerPoint& y,
                                      std::span<const double> u_horizontal, double gap,
                                      const LayerSpec& spec, double far_threshold,
                                      long long* samples, double* max_radius) {
  double scale = 1.0;
  for (const auto& x : xs) scale = std::max(scale, lp_dist(x, y, spec));
  const double frac = 0.5 * std::min(gap, 1.0);
  double base = std::ceil(far_threshold + scale + 2.0);
  for (int attempt = 0; attempt < 60; ++attempt) {
    const double radius = base + frac;
    LayerPoint z = y;
    for (int i = 0; i < spec.n; ++i) z.h[i] += radius * u_horizontal[i];
    if (samples) ++(*samples);
    if (max_radius) *max_radius = std::max(*max_radius, radius);
    const long long rho_y = ceil_int(lp_dist(z, y, spec));
    long long best = std::numeric_limits<long long>::max();
    for (const auto& x : xs) best = std::min(best, ceil_int(lp_dist(z, x, spec)));
    if (best < rho_y) return true;
    base *= 2.0;
    if (base > 1e12) break;
  }
  return false;
}

}  // namespace detail

// Planar ray criterion evaluated through the hop metric: for each horizontal
// escape direction, some x eventually gets strictly closer (in hops) than y.
// Equivalent to omega_check; the hop-side confirmation uses far-regime radii.
inline bool gamma_check(const LayerPoint& x1, const LayerPoint& x2, const LayerPoint& y,
                        const LayerSpec& spec, const HopConfig& cfg = {},
                        double margin = kSeparationMargin) {
  if (spec.n != 1) throw std::invalid_argument("gamma_check: planar strips only");
  require_distinct(x1, x2, spec, "gamma_check");
  require_distinct(x1, y, spec, "gamma_check");
  require_distinct(x2, y, spec, "gamma_check");
  const double ft = resolve_far_threshold(spec, cfg);
  const std::vector<LayerPoint> xs = {x1, x2};
  for (double dir : {+1.0, -1.0}) {
    const double gap =
        std::max(dir * (x1.h[0] - y.h[0]), dir * (x2.h[0] - y.h[0]));
    if (gap <= margin) return false;
    const std::vector<double> u = {dir};
    if (!detail::confirm_separation_on_ray(xs, y, u, gap, spec, ft, nullptr, nullptr))
      return false;
  }
  return true;
}

struct SeparationVerdict {
  bool omega = false;
  bool gamma = false;
  long long samples = 0;
  double max_radius = 0.0;
};

inline bool omega_hat_check(const std::vector<LayerPoint>& xs, const LayerPoint& y,
                            const LayerSpec& spec, const Tolerance& tol = {}) {
  if (spec.n < 2) throw std::invalid_argument("omega_hat_check: requires n >= 2");
  if (static_cast<int>(xs.size()) != spec.n + 1)
    throw std::invalid_argument("omega_hat_check: need n+1 points");
  std::vector<std::vector<double>> projections;
  projections.reserve(xs.size());
  for (const auto& x : xs) projections.push_back(project(x));
  return hull_interior_contains(projections, project(y), tol);
}

namespace detail {

// Direction on the horizontal lp unit sphere whose supporting functional is
// the given Euclidean normal: the inverse gradient map u_i ~ sign(s_i)
// |s_i|^(1/(p-1)).
inline std::vector<double> dual_direction(std::span<const double> s, double p) {
  std::vector<double> u(s.size(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double c = s[i];
    if (c != 0.0) u[i] = (c > 0 ? 1.0 : -1.0) * std::pow(std::abs(c), 1.0 / (p - 1.0));
  }
  const double nn = lp_norm(u, p);
  if (nn > 0)
    for (double& c : u) c /= nn;
  return u;
}

inline std::vector<std::vector<double>> low_discrepancy_directions(int n, double p, int count,
                                                                   std::uint64_t seed) {
  std::vector<std::vector<double>> dirs;
  dirs.reserve(count);
  if (n == 2) {
    const double golden = 0.6180339887498949;
    double t = 0.5;
    for (int i = 0; i < count; ++i) {
      t += golden;
      t -= std::floor(t);
      const double ang = 2.0 * 3.14159265358979323846 * t;
      std::vector<double> u = {std::cos(ang), std::sin(ang)};
      const double nn = lp_norm(u, p);
      for (double& c : u) c /= nn;
      dirs.push_back(std::move(u));
    }
    return dirs;
  }
  if (n == 3) {
    const double golden_angle = 2.399963229728653;
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double ang = golden_angle * i;
      std::vector<double> u = {r * std::cos(ang), r * std::sin(ang), z};
      const double nn = lp_norm(u, p);
      for (double& c : u) c /= nn;
      dirs.push_back(std::move(u));
    }
    return dirs;
  }
  auto rng = rng_stream(seed, 0xd17);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < count; ++i) {
    std::vector<double> u(n);
    double nn = 0.0;
    while (nn < 1e-12) {
      for (double& c : u) c = g(rng);
      nn = lp_norm(u, p);
    }
    for (double& c : u) c /= nn;
    dirs.push_back(std::move(u));
  }
  return dirs;
}

// Nullspace basis of the rows of `mat` (n columns), via Gaussian elimination.
inline std::vector<std::vector<double>> nullspace(std::vector<std::vector<double>> mat, int n) {
  const int rows = static_cast<int>(mat.size());
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < n && r < rows; ++c) {
    int piv = r;
    for (int rr = r + 1; rr < rows; ++rr)
      if (std::abs(mat[rr][c]) > std::abs(mat[piv][c])) piv = rr;
    if (std::abs(mat[piv][c]) < 1e-10) continue;
    std::swap(mat[r], mat[piv]);
    for (int rr = 0; rr < rows; ++rr) {
      if (rr == r) continue;
      const double f = mat[rr][c] / mat[r][c];
      for (int cc = 0; cc < n; ++cc) mat[rr][cc] -= f * mat[r][cc];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<std::vector<double>> basis;
  for (int c = 0; c < n; ++c) {
    if (std::find(pivot_col.begin(), pivot_col.end(), c) != pivot_col.end()) continue;
    std::vector<double> v(n, 0.0);
    v[c] = 1.0;
    for (int rr = 0; rr < static_cast<int>(pivot_col.size()); ++rr)
      v[pivot_col[rr]] = -mat[rr][c] / mat[rr][pivot_col[rr]];
    double nn = 0.0;
    for (double x : v) nn += x * x;
    nn = std::sqrt(nn);
    for (double& x : v) x /= nn;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace detail

struct GammaHatOptions {
  int directions = 512;
  double margin = kSeparationMargin;
};

// Multidimensional ray criterion: along every sampled horizontal escape
// direction some x_k must eventually be strictly closer in hops than y.
// Directions are a low-discrepancy set plus the adversarial ones: the duals
// of the projected simplex's outward facet normals (and of the affine-span
// normals when the projections are degenerate), so a disagreement with the
// hull criterion would have to slip past its own facet certificate.
inline SeparationVerdict gamma_hat_check(const std::vector<LayerPoint>& xs, const LayerPoint& y,
                                         const LayerSpec& spec, const HopConfig& cfg = {},
                                         const GammaHatOptions& opts = {}) {
  if (spec.n < 2) throw std::invalid_argument("gamma_hat_check: requires n >= 2");
  if (static_cast<int>(xs.size()) != spec.n + 1)
    throw std::invalid_argument("gamma_hat_check: need n+1 points");
  for (const auto& x : xs) {
    check_dims(x, spec, "gamma_hat_check");
    require_distinct(x, y, spec, "gamma_hat_check");
  }
  SeparationVerdict verdict;
  verdict.omega = omega_hat_check(xs, y, spec);

  const int n = spec.n;
  auto dirs = detail::low_discrepancy_directions(n, spec.p, opts.directions, cfg.seed);

  // Adversarial directions from the projected simplex.
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 1; k < xs.size(); ++k) {
    std::vector<double> e(n);
    for (int i = 0; i < n; ++i) e[i] = xs[k].h[i] - xs[0].h[i];
    rows.push_back(std::move(e));
  }
  auto kernel = detail::nullspace(rows, n);
  if (!kernel.empty()) {
    for (const auto& nu : kernel) {
      dirs.push_back(detail::dual_direction(nu, spec.p));
      std::vector<double> neg(nu.size());
      for (std::size_t i = 0; i < nu.size(); ++i) neg[i] = -nu[i];
      dirs.push_back(detail::dual_direction(neg, spec.p));
    }
  } else {
    for (std::size_t skip = 0; skip < xs.size(); ++skip) {
      std::vector<std::vector<double>> facet;
      std::size_t base = (skip == 0) ? 1 : 0;
      for (std::size_t k = 0; k < xs.size(); ++k) {
        if (k == skip || k == base) continue;
        std::vector<double> e(n);
        for (int i = 0; i < n; ++i) e[i] = xs[k].h[i] - xs[base].h[i];
        facet.push_back(std::move(e));
      }
      auto normals = detail::nullspace(facet, n);
      if (normals.size() != 1) continue;
      auto nu = normals.front();
      double side = 0.0;
      for (int i = 0; i < n; ++i) side += nu[i] * (xs[skip].h[i] - xs[base].h[i]);
      if (side > 0)
        for (double& c : nu) c = -c;  // orient away from the opposite vertex
      dirs.push_back(detail::dual_direction(nu, spec.p));
    }
  }

  const double ft = resolve_far_threshold(spec, cfg);
  verdict.gamma = true;
  for (const auto& u : dirs) {
    const auto grad = lp_gradient(u, spec.p);  // supporting functional at u
    double gap = -std::numeric_limits<double>::infinity();
    for (const auto& x : xs) {
      double g = 0.0;
      for (int i = 0; i < n; ++i) g += grad[i] * (x.h[i] - y.h[i]);
      gap = std::max(gap, g);
    }
    ++verdict.samples;
    if (gap <= opts.margin) {
      verdict.gamma = false;
      break;
    }
    if (!detail::confirm_separation_on_ray(xs, y, u, gap, spec, ft, &verdict.samples,
                                           &verdict.max_radius)) {
      verdict.gamma = false;
      break;
    }
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Width detector.

struct WidthWitnessTriple {
  LayerPoint x, y, z;
  long long k = 0;
  double delta = 0.0;
};

// Canonical witness of the layer's width: y spans the full vertical diagonal
// from a fiber corner x, z sits horizontally so that the distance from y to z
// is the smallest integer k at least eps * d_{m,p}; then
// k^p - delta^p = (eps * d_{m,p})^p exactly.
inline WidthWitnessTriple width_witness(const LayerSpec& spec, const Tolerance& tol = {}) {
  spec.require_smooth("width_witness");
  WidthWitnessTriple out;
  out.x = LayerPoint{std::vector<double>(spec.n, 0.0), std::vector<double>(spec.m, 0.0)};
  out.y = out.x;
  for (int j = 0; j < spec.m; ++j) out.y.v[j] = spec.eps;
  const double diagonal = spec.eps * cube_diameter(spec.m, spec.p);
  out.k = std::max(1ll, ceil_int(diagonal, tol));
  const double kp = std::pow(static_cast<double>(out.k), spec.p);
  out.delta = std::pow(std::max(0.0, kp - std::pow(diagonal, spec.p)), 1.0 / spec.p);
  out.z = out.x;
  out.z.h[0] = out.delta;
  return out;
}

// The detector inequality k^p - delta^p >= eps'^p * d_{m,p}^p evaluated on
// the canonical witness; true exactly when eps' <= eps (up to tolerance).
inline bool width_witness_supports(const LayerSpec& spec, double eps_prime,
                                   const Tolerance& tol = {}) {
  const auto w = width_witness(spec, tol);
  const double lhs = std::pow(static_cast<double>(w.k), spec.p) - std::pow(w.delta, spec.p);
  const double rhs = std::pow(eps_prime * cube_diameter(spec.m, spec.p), spec.p);
  return lhs >= rhs - tol.abs_tol;
}

// ---------------------------------------------------------------------------
// Forward isometry sanity.

// Parameters of a candidate layer self-map.  Translations, horizontal
// rotations (p = 2), reflections, vertical coordinate permutations and flips
// preserve the layer; v_shift and tilt_angle deliberately do not and exist
// so violating maps can be constructed for testing.
struct RigidMotion {
  std::vector<double> h_translate;
  double rotation_angle = 0.0;
  bool h_reflect = false;
  std::vector<int> v_permutation;
  std::vector<std::uint8_t> v_flip;
  double v_shift = 0.0;
  double tilt_angle = 0.0;
};

inline LayerPoint apply_motion(const RigidMotion& motion, const LayerPoint& pt,
                               const LayerSpec& spec) {
  LayerPoint out = pt;
  if (motion.h_reflect) out.h[0] = -out.h[0];
  if (motion.rotation_angle != 0.0) {
    if (spec.n < 2)
      throw std::invalid_argument("apply_motion: rotation needs two horizontal coordinates");
    const double c = std::cos(motion.rotation_angle), s = std::sin(motion.rotation_angle);
    const double x0 = out.h[0], x1 = out.h[1];
    out.h[0] = c * x0 - s * x1;
    out.h[1] = s * x0 + c * x1;
  }
  if (!motion.h_translate.empty()) {
    if (static_cast<int>(motion.h_translate.size()) != spec.n)
      throw std::invalid_argument("apply_motion: translation dimension mismatch");
    for (int i = 0; i < spec.n; ++i) out.h[i] += motion.h_translate[i];
  }
  if (!motion.v_permutation.empty()) {
    if (static_cast<int>(motion.v_permutation.size()) != spec.m)
      throw std::invalid_argument("apply_motion: vertical permutation size mismatch");
    std::vector<double> v(spec.m);
    for (int j = 0; j < spec.m; ++j) v[j] = out.v[motion.v_permutation[j]];
    out.v = std::move(v);
  }
  if (!motion.v_flip.empty()) {
    for (int j = 0; j < spec.m && j < static_cast<int>(motion.v_flip.size()); ++j)
      if (motion.v_flip[j]) out.v[j] = spec.eps - out.v[j];
  }
  if (motion.v_shift != 0.0)
    for (double& y : out.v) y += motion.v_shift;
  if (motion.tilt_angle != 0.0) {
    const double c = std::cos(motion.tilt_angle), s = std::sin(motion.tilt_angle);
    const double x0 = out.h[0], y0 = out.v[0];
    out.h[0] = c * x0 - s * y0;
    out.v[0] = s * x0 + c * y0;
  }
  return out;
}

// Samples unit-distance pairs and checks the mapped pairs stay in the layer
// at unit distance.  Maps that fail membership or break a unit distance are
// rejected with `false`.
inline bool isometry_sanity(const LayerSpec& spec, const RigidMotion& motion, int sample_pairs,
                            std::uint64_t seed, const Tolerance& tol = {}) {
  spec.require_smooth("isometry_sanity");
  auto rng = rng_stream(seed, 0x15031953);
  std::uniform_real_distribution<double> uh(-8.0, 8.0);
  std::uniform_real_distribution<double> uy(0.0, spec.eps);
  std::normal_distribution<double> g(0.0, 1.0);

  for (int it = 0; it < sample_pairs; ++it) {
    LayerPoint x;
    x.h.resize(spec.n);
    x.v.resize(spec.m);
    for (double& c : x.h) c = uh(rng);
    for (double& c : x.v) c = uy(rng);

    // Unit partner: draw target verticals until the vertical part of the
    // difference is shorter than a hop, then spend the rest horizontally.
    LayerPoint y = x;
    double vpow = 1.0;
    std::vector<double> dv(spec.m);
    for (int guard = 0; guard < 256 && vpow >= 0.9999; ++guard) {
      for (int j = 0; j < spec.m; ++j) dv[j] = uy(rng) - x.v[j];
      vpow = lp_norm_pow(dv, spec.p);
    }
    if (vpow >= 0.9999) {
      std::fill(dv.begin(), dv.end(), 0.0);
      vpow = 0.0;
    }
    std::vector<double> dh(spec.n);
    double nn = 0.0;
    while (nn < 1e-12) {
      for (double& c : dh) c = g(rng);
      nn = lp_norm(dh, spec.p);
    }
    const double hlen = std::pow(1.0 - vpow, 1.0 / spec.p);
    for (int i = 0; i < spec.n; ++i) y.h[i] = x.h[i] + hlen * dh[i] / nn;
    for (int j = 0; j < spec.m; ++j) y.v[j] = x.v[j] + dv[j];

    const LayerPoint fx = apply_motion(motion, x, spec);
    const LayerPoint fy = apply_motion(motion, y, spec);
    if (!in_layer(fx, spec, tol) || !in_layer(fy, spec, tol)) return false;
    if (std::abs(lp_dist(fx, fy, spec) - 1.0) > 10.0 * tol.abs_tol) return false;
  }
  return true;
}

}  // namespace layergraph
