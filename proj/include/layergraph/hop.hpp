#pragma once

// Graph distance in the unit distance graph of a layer: the minimum number of
// lp-unit hops joining two points while staying inside the layer.  Far pairs
// admit the exact value ceil(lp distance) together with an explicit witness
// path; near pairs get a certified lower bound and best-effort upper bounds
// from validated witnesses.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "layergraph/core.hpp"
#include "layergraph/optimize.hpp"

namespace layergraph {

struct HopInterval {
  long long lower = 0;
  std::optional<long long> upper;
  bool exact = false;
};

struct WitnessPath {
  std::vector<LayerPoint> vertices;
  [[nodiscard]] long long edges() const {
    return vertices.empty() ? 0 : static_cast<long long>(vertices.size()) - 1;
  }
};

struct HopConfig {
  double far_threshold = 0.0;  // 0 = derive from the layer, see default_far_threshold
  int near_budget = 16;        // largest hop count tried by near_search
  int restarts = 32;           // multistart count for the penalty solver
  std::uint64_t seed = 0x1a2b3c4d5e6full;
};

// Ceiling with an absolute snap band around integers, so distances computed
// to be integral within tolerance do not round up.
inline long long ceil_int(double d, const Tolerance& tol = {}) {
  const long long nearest = std::llround(d);
  if (std::abs(d - static_cast<double>(nearest)) <= tol.abs_tol) return std::max(0ll, nearest);
  return static_cast<long long>(std::ceil(d));
}

// Largest per-hop shrinkage available to a zigzag whose vertical swing is
// capped at `amp` (lp length): 1 - (1 - amp^p)^(1/p).
inline double zigzag_shrinkage(double amp, double p) {
  amp = std::min(amp, 0.95);
  return 1.0 - std::pow(std::max(0.0, 1.0 - std::pow(amp, p)), 1.0 / p);
}

// Distance beyond which the ceiling formula is certified by construction.
// For n >= 2 the unit sphere around a point is connected inside the layer and
// a single corrective hop exists at any scale, so the bound stays at the
// 10*eps + 12 regime.  For n = 1 a corrective zigzag must absorb up to one
// unit of slack at a shrinkage rate limited by the width, which forces the
// threshold up to ~1/shrinkage for thin strips.
inline double default_far_threshold(const LayerSpec& spec) {
  const double base = 10.0 * spec.eps + 12.0;
  if (spec.n >= 2) return base;
  const double amp = spec.eps * std::pow(static_cast<double>(spec.m), 1.0 / spec.p);
  const double q = zigzag_shrinkage(amp, spec.p);
  return std::max(base, 1.0 + 1.5 / q);
}

inline double resolve_far_threshold(const LayerSpec& spec, const HopConfig& cfg) {
  if (cfg.far_threshold <= 0.0) return default_far_threshold(spec);
  if (spec.n == 1 && spec.m == 1 && cfg.far_threshold < 10.0 * spec.eps + 10.0)
    throw std::invalid_argument("HopConfig: far_threshold below 10*eps + 10 for a planar strip");
  return cfg.far_threshold;
}

inline long long hop_lower_bound(const LayerPoint& a, const LayerPoint& b, const LayerSpec& spec,
                                 const Tolerance& tol = {}) {
  const double d = lp_dist(a, b, spec);
  if (d <= tol.abs_tol) return 0;
  return std::max(1ll, ceil_int(d, tol));
}

struct WitnessCheck {
  bool ok = true;
  std::string why;
  double max_edge_residual = 0.0;
};

inline WitnessCheck check_witness(const std::vector<LayerPoint>& vertices, const LayerSpec& spec,
                                  const Tolerance& tol = {}, long long require_edges = -1,
                                  bool closed = false) {
  WitnessCheck out;
  const long long edges =
      closed ? static_cast<long long>(vertices.size()) : static_cast<long long>(vertices.size()) - 1;
  if (require_edges >= 0 && edges != require_edges) {
    out.ok = false;
    out.why = "edge count mismatch";
    return out;
  }
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!in_layer(vertices[i], spec, tol)) {
      out.ok = false;
      out.why = "vertex " + std::to_string(i) + " outside the layer";
      return out;
    }
  }
  for (long long e = 0; e < edges; ++e) {
    const auto& u = vertices[static_cast<std::size_t>(e)];
    const auto& w = vertices[static_cast<std::size_t>((e + 1) % vertices.size())];
    const double len = lp_dist(u, w, spec);
    out.max_edge_residual = std::max(out.max_edge_residual, std::abs(len - 1.0));
    if (std::abs(len - 1.0) > tol.abs_tol) {
      out.ok = false;
      out.why = "edge " + std::to_string(e) + " is not unit length";
      return out;
    }
  }
  return out;
}

namespace detail {

// Far witness in a layer with n = 1: a sawtooth homotopy between the straight
// chain and a full-swing zigzag bouncing between the two vertical cube
// corners.  Interior vertex verticals are (1-t)*linear + t*corner, so they
// stay in the layer for every t in [0,1]; a single root solve on t matches
// the total horizontal advance to the required span.
inline WitnessPath far_witness_sawtooth(const LayerPoint& a, const LayerPoint& b,
                                        const LayerSpec& spec, long long k,
                                        const Tolerance& tol) {
  const double x_a = a.h[0], x_b = b.h[0];
  const double span = std::abs(x_b - x_a);
  const double sign = (x_b >= x_a) ? 1.0 : -1.0;
  const int m = spec.m;
  const auto kk = static_cast<double>(k);

  std::vector<double> dv(m);
  for (int j = 0; j < m; ++j) dv[j] = b.v[j] - a.v[j];

  // Vertical profile of vertex i at homotopy parameter t.
  auto profile = [&](long long i, double t, std::vector<double>& out) {
    if (i == 0) {
      out = a.v;
      return;
    }
    if (i == k) {
      out = b.v;
      return;
    }
    const double corner = (i % 2 == 1) ? spec.eps : 0.0;
    out.resize(m);
    const double f = static_cast<double>(i) / kk;
    for (int j = 0; j < m; ++j) out[j] = (1.0 - t) * (a.v[j] + f * dv[j]) + t * corner;
  };

  std::vector<double> prev(m), cur(m), hop(m);
  auto advance_total = [&](double t) -> double {
    double total = 0.0;
    profile(0, t, prev);
    for (long long i = 1; i <= k; ++i) {
      profile(i, t, cur);
      for (int j = 0; j < m; ++j) hop[j] = cur[j] - prev[j];
      const double vpow = lp_norm_pow(hop, spec.p);
      if (vpow >= 1.0) return -1.0;  // over-swung: vertical part alone exceeds a hop
      total += std::pow(1.0 - vpow, 1.0 / spec.p);
      std::swap(prev, cur);
    }
    return total;
  };

  // advance_total(0) = (k^p - |dv|^p)^(1/p) >= span since k >= distance.
  double lo = 0.0;
  double f_lo = advance_total(lo) - span;
  if (f_lo < 0.0)
    throw std::runtime_error("far_witness_path: straight chain shorter than span");
  double hi = lo;
  double f_hi = f_lo;
  bool bracketed = false;
  const int grid = 96;
  for (int g = 1; g <= grid; ++g) {
    const double t = static_cast<double>(g) / grid;
    const double adv = advance_total(t);
    if (adv < 0.0) break;  // swing cap reached
    const double f = adv - span;
    hi = t;
    f_hi = f;
    if (f <= 0.0) {
      bracketed = true;
      break;
    }
    lo = t;
    f_lo = f;
  }
  if (!bracketed && f_hi > 0.0)
    throw std::runtime_error(
        "far_witness_path: zigzag cannot absorb the slack; far_threshold set too low");
  for (int it = 0; it < 120 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = advance_total(mid) - span;
    if (f > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double t_star = 0.5 * (lo + hi);

  WitnessPath path;
  path.vertices.reserve(static_cast<std::size_t>(k) + 1);
  path.vertices.push_back(a);
  profile(0, t_star, prev);
  double x = x_a;
  for (long long i = 1; i <= k; ++i) {
    profile(i, t_star, cur);
    for (int j = 0; j < m; ++j) hop[j] = cur[j] - prev[j];
    const double vpow = lp_norm_pow(hop, spec.p);
    x += sign * std::pow(std::max(0.0, 1.0 - vpow), 1.0 / spec.p);
    LayerPoint pt;
    pt.h = {x};
    pt.v = cur;
    path.vertices.push_back(std::move(pt));
    std::swap(prev, cur);
  }
  path.vertices.back() = b;  // absorb the O(1e-13) root-solve slack into the last edge
  const auto chk = check_witness(path.vertices, spec, tol, k);
  if (!chk.ok) throw std::runtime_error("far_witness_path: sawtooth witness failed validation: " + chk.why);
  return path;
}

// Far witness for n >= 2: the unit sphere around `a` inside the layer is
// connected, so a point x3 with ||x3 - a|| = 1 and ||x3 - b|| = floor(dist)
// exists along a two-phase curve (tilt the first step down to horizontal,
// then rotate within the horizontal unit sphere away from b); a straight
// integer chain finishes the path.
inline WitnessPath far_witness_sphere(const LayerPoint& a, const LayerPoint& b,
                                      const LayerSpec& spec, long long k, const Tolerance& tol) {
  const double dist = lp_dist(a, b, spec);
  const long long chain_len = k - 1;

  std::vector<double> hhat(spec.n), vhat(spec.m);
  for (int i = 0; i < spec.n; ++i) hhat[i] = (b.h[i] - a.h[i]) / dist;
  for (int j = 0; j < spec.m; ++j) vhat[j] = (b.v[j] - a.v[j]) / dist;
  const double hnorm = lp_norm(hhat, spec.p);
  if (hnorm < 1e-12)
    throw std::runtime_error("far_witness_path: far pair with vanishing horizontal part");

  // Horizontal direction transverse to hhat (Euclidean Gram-Schmidt).
  std::vector<double> perp(spec.n, 0.0);
  {
    double hh2 = 0.0;
    for (double c : hhat) hh2 += c * c;
    int axis = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < spec.n; ++i)
      if (std::abs(hhat[i]) < best) {
        best = std::abs(hhat[i]);
        axis = i;
      }
    perp[axis] = 1.0;
    const double proj = hhat[axis] / hh2;
    for (int i = 0; i < spec.n; ++i) perp[i] -= proj * hhat[i];
    double pn = 0.0;
    for (double c : perp) pn += c * c;
    pn = std::sqrt(pn);
    for (double& c : perp) c /= pn;
  }

  // sigma in [0,1]: scale the vertical part of the step from full to zero.
  // sigma in [1, 1+pi]: rotate the horizontal step direction by sigma - 1.
  auto point_at = [&](double sigma) {
    std::vector<double> w(spec.dim());
    if (sigma <= 1.0) {
      const double beta = 1.0 - sigma;
      for (int i = 0; i < spec.n; ++i) w[i] = hhat[i];
      for (int j = 0; j < spec.m; ++j) w[spec.n + j] = beta * vhat[j];
    } else {
      const double phi = sigma - 1.0;
      const double c = std::cos(phi), s = std::sin(phi);
      for (int i = 0; i < spec.n; ++i) w[i] = c * hhat[i] + s * perp[i];
      for (int j = 0; j < spec.m; ++j) w[spec.n + j] = 0.0;
    }
    const double nn = lp_norm(w, spec.p);
    LayerPoint pt;
    pt.h.resize(spec.n);
    pt.v.resize(spec.m);
    for (int i = 0; i < spec.n; ++i) pt.h[i] = a.h[i] + w[i] / nn;
    for (int j = 0; j < spec.m; ++j) pt.v[j] = a.v[j] + w[spec.n + j] / nn;
    return pt;
  };
  auto gap = [&](double sigma) {
    return lp_dist(point_at(sigma), b, spec) - static_cast<double>(chain_len);
  };

  double lo = 0.0, hi = 1.0 + 3.14159265358979323846;
  double f_lo = gap(lo);
  if (f_lo >= 0.0)
    throw std::runtime_error("far_witness_path: initial step does not undershoot the chain length");
  // The far side of the horizontal sphere overshoots; bracket by grid scan.
  const int grid = 64;
  double prev_sigma = lo, prev_f = f_lo;
  bool found = false;
  for (int g = 1; g <= grid; ++g) {
    const double sigma = hi * static_cast<double>(g) / grid;
    const double f = gap(sigma);
    if (prev_f < 0.0 && f >= 0.0) {
      lo = prev_sigma;
      hi = sigma;
      found = true;
      break;
    }
    prev_sigma = sigma;
    prev_f = f;
  }
  if (!found) throw std::runtime_error("far_witness_path: failed to bracket the corrective hop");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const LayerPoint x3 = point_at(0.5 * (lo + hi));

  WitnessPath path;
  path.vertices.push_back(a);
  auto chain = chain_points(x3, b, static_cast<int>(chain_len), spec, tol);
  for (auto& pt : chain) path.vertices.push_back(std::move(pt));
  const auto chk = check_witness(path.vertices, spec, tol, k);
  if (!chk.ok)
    throw std::runtime_error("far_witness_path: sphere witness failed validation: " + chk.why);
  return path;
}

}  // namespace detail

// Witness path of exactly ceil(lp distance) unit hops for a far pair.
inline WitnessPath far_witness_path(const LayerPoint& a, const LayerPoint& b,
                                    const LayerSpec& spec, const HopConfig& cfg = {},
                                    const Tolerance& tol = {}) {
  spec.require_smooth("far_witness_path");
  const double threshold = resolve_far_threshold(spec, cfg);
  const double dist = lp_dist(a, b, spec);
  if (!(dist > threshold))
    throw std::invalid_argument("far_witness_path: pair is not beyond the far threshold");
  const long long k = ceil_int(dist, tol);
  if (std::abs(dist - static_cast<double>(std::llround(dist))) <= tol.abs_tol) {
    WitnessPath path;
    path.vertices = chain_points(a, b, static_cast<int>(std::llround(dist)), spec, tol);
    return path;
  }
  if (spec.n == 1) return detail::far_witness_sawtooth(a, b, spec, k, tol);
  return detail::far_witness_sphere(a, b, spec, k, tol);
}

namespace detail {

// Two-hop witness search restricted to the equidistant locus.  Returns a
// point z with ||z-a|| = ||z-b|| = 1 inside the layer, if one is found.
inline std::optional<LayerPoint> two_hop_witness(const LayerPoint& a, const LayerPoint& b,
                                                 const LayerSpec& spec, const Tolerance& tol) {
  const double dist = lp_dist(a, b, spec);
  if (std::abs(dist - 2.0) <= tol.abs_tol) {
    LayerPoint mid;
    mid.h.resize(spec.n);
    mid.v.resize(spec.m);
    for (int i = 0; i < spec.n; ++i) mid.h[i] = 0.5 * (a.h[i] + b.h[i]);
    for (int j = 0; j < spec.m; ++j) mid.v[j] = 0.5 * (a.v[j] + b.v[j]);
    return mid;
  }
  if (dist > 2.0) return std::nullopt;

  if (spec.n >= 2) {
    // A horizontal plane through the midpoint lies inside the layer, and the
    // equidistant curve in it always reaches unit distance.
    const auto res = unit_equidistant_pair(a, b, spec, tol);
    if (res.kind == EquidistantKind::TwoPoints) return res.z1;
    return std::nullopt;
  }

  // n = 1.  Vertical pair: the horizontal line through the midpoint is the
  // exact bisector.
  if (std::abs(a.h[0] - b.h[0]) <= 1e-14) {
    std::vector<double> dv(spec.m);
    for (int j = 0; j < spec.m; ++j) dv[j] = 0.5 * (a.v[j] - b.v[j]);
    const double vpow = lp_norm_pow(dv, spec.p);
    if (vpow >= 1.0) return std::nullopt;
    LayerPoint z;
    z.h = {a.h[0] + std::pow(1.0 - vpow, 1.0 / spec.p)};
    z.v.resize(spec.m);
    for (int j = 0; j < spec.m; ++j) z.v[j] = 0.5 * (a.v[j] + b.v[j]);
    return z;
  }

  if (spec.p == 2.0 && spec.m == 1) {
    // Analytic: intersect the two unit circles, keep an apex inside the slab.
    const double dx = b.h[0] - a.h[0], dy = b.v[0] - a.v[0];
    const double r = std::sqrt(std::max(0.0, 1.0 - 0.25 * dist * dist));
    const double inv = 1.0 / dist;
    const double wx = -dy * inv, wy = dx * inv;
    const double mx = 0.5 * (a.h[0] + b.h[0]), my = 0.5 * (a.v[0] + b.v[0]);
    for (double s : {+1.0, -1.0}) {
      const double y = my + s * r * wy;
      if (y >= -tol.abs_tol && y <= spec.eps + tol.abs_tol)
        return strip_point(mx + s * r * wx, std::clamp(y, 0.0, spec.eps));
    }
    return std::nullopt;
  }

  if (spec.m == 1) {
    // General p strip: the bisector is a graph x*(y) over the vertical
    // coordinate; sweep y for a crossing of the common distance through 1.
    std::vector<double> dir = {1.0};
    auto bis_point = [&](double y) {
      const std::vector<double> base = {0.5 * (a.h[0] + b.h[0])};
      LayerPoint z;
      // Reduce to a 2-d bisector solve in the (x, y) plane.
      auto eval = [&](double xx) {
        const std::vector<double> da = {xx - a.h[0], y - a.v[0]};
        const std::vector<double> db = {xx - b.h[0], y - b.v[0]};
        return lp_norm(da, spec.p) - lp_norm(db, spec.p);
      };
      double lo = base[0] - 1.0, hi = base[0] + 1.0;
      double flo = eval(lo), fhi = eval(hi);
      int guard = 0;
      while (flo * fhi > 0.0 && guard++ < 80) {
        lo -= (hi - lo);
        hi += (hi - lo);
        flo = eval(lo);
        fhi = eval(hi);
      }
      for (int it = 0; it < 120 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
        const double midx = 0.5 * (lo + hi);
        const double f = eval(midx);
        if ((f <= 0.0) == (flo <= 0.0)) {
          lo = midx;
          flo = f;
        } else {
          hi = midx;
        }
      }
      z.h = {0.5 * (lo + hi)};
      z.v = {y};
      return z;
    };
    auto dist_at = [&](double y) { return lp_dist(bis_point(y), a, spec); };
    const int grid = 128;
    double prev_y = 0.0, prev_g = dist_at(0.0) - 1.0;
    if (std::abs(prev_g) <= tol.abs_tol) return bis_point(0.0);
    for (int g = 1; g <= grid; ++g) {
      const double y = spec.eps * static_cast<double>(g) / grid;
      const double gy = dist_at(y) - 1.0;
      if (std::abs(gy) <= tol.abs_tol) return bis_point(y);
      if (prev_g * gy < 0.0) {
        double lo = prev_y, hi = y, flo = prev_g;
        for (int it = 0; it < 120 && hi - lo > 1e-15; ++it) {
          const double midy = 0.5 * (lo + hi);
          const double f = dist_at(midy) - 1.0;
          if ((f <= 0.0) == (flo <= 0.0)) {
            lo = midy;
            flo = f;
          } else {
            hi = midy;
          }
        }
        return bis_point(0.5 * (lo + hi));
      }
      prev_y = y;
      prev_g = gy;
    }
    return std::nullopt;
  }

  // n = 1, m >= 2: coarse sweep over the vertical cube (best effort).
  auto x_of = [&](const std::vector<double>& v) {
    auto eval = [&](double xx) {
      std::vector<double> da(spec.dim()), db(spec.dim());
      da[0] = xx - a.h[0];
      db[0] = xx - b.h[0];
      for (int j = 0; j < spec.m; ++j) {
        da[1 + j] = v[j] - a.v[j];
        db[1 + j] = v[j] - b.v[j];
      }
      return lp_norm(da, spec.p) - lp_norm(db, spec.p);
    };
    double lo = 0.5 * (a.h[0] + b.h[0]) - 2.0, hi = lo + 4.0;
    double flo = eval(lo);
    for (int it = 0; it < 140 && hi - lo > 1e-14; ++it) {
      const double midx = 0.5 * (lo + hi);
      const double f = eval(midx);
      if ((f <= 0.0) == (flo <= 0.0)) {
        lo = midx;
        flo = f;
      } else {
        hi = midx;
      }
    }
    return 0.5 * (lo + hi);
  };
  const int per_axis = (spec.m == 2) ? 33 : 9;
  std::vector<double> v(spec.m, 0.0);
  std::optional<LayerPoint> best;
  double best_res = 1e9;
  std::vector<int> idx(spec.m, 0);
  while (true) {
    for (int j = 0; j < spec.m; ++j) v[j] = spec.eps * idx[j] / double(per_axis - 1);
    LayerPoint z;
    z.h = {x_of(v)};
    z.v = v;
    const double res = std::abs(lp_dist(z, a, spec) - 1.0);
    if (res < best_res) {
      best_res = res;
      best = z;
    }
    int j = 0;
    for (; j < spec.m; ++j) {
      if (++idx[j] < per_axis) break;
      idx[j] = 0;
    }
    if (j == spec.m) break;
  }
  if (best && best_res <= tol.abs_tol) return best;
  return std::nullopt;
}

}  // namespace detail

// Certified lower bound from horizontal reachability in a layer with n = 1.
// Every hop has a horizontal component of magnitude at least
// c_min = (1 - min(1, eps * d_{m,p})^p)^(1/p), so K hops with J of them
// pointing backwards can only cover a horizontal span inside
// [(K-J) c_min - J, (K-J) - J c_min].  The smallest K whose union of these
// ranges reaches |bx - ax| bounds the hop distance from below; in thin strips
// this is much sharper than the distance ceiling.
inline long long strip_advance_lower_bound(const LayerPoint& a, const LayerPoint& b,
                                           const LayerSpec& spec, const Tolerance& tol = {}) {
  if (spec.n != 1) throw std::invalid_argument("strip_advance_lower_bound: requires n == 1");
  const double dist = lp_dist(a, b, spec);
  if (dist <= tol.abs_tol) return 0;
  const long long k0 = std::max(1ll, ceil_int(dist, tol));
  const double amp = spec.eps * std::pow(static_cast<double>(spec.m), 1.0 / spec.p);
  if (amp >= 1.0) return k0;
  const double c_min = std::pow(1.0 - std::pow(amp, spec.p), 1.0 / spec.p);
  const double span = std::abs(b.h[0] - a.h[0]);
  for (long long k = k0; k < k0 + 4096; ++k) {
    for (long long j = 0; j * 2 <= k; ++j) {
      const double fwd = static_cast<double>(k - j);
      const double lo = fwd * c_min - static_cast<double>(j);
      const double hi = fwd - static_cast<double>(j) * c_min;
      if (span >= lo - tol.abs_tol && span <= hi + tol.abs_tol) return k;
    }
  }
  return k0;  // unreachable for sane inputs
}

// True iff some z in the layer is at unit distance from both a and b.
inline bool two_hop_decision(const LayerPoint& a, const LayerPoint& b, const LayerSpec& spec,
                             const Tolerance& tol = {}) {
  spec.require_smooth("two_hop_decision");
  const double dist = lp_dist(a, b, spec);
  if (!(dist > 0.0) || dist > 2.0 + tol.abs_tol)
    throw std::invalid_argument("two_hop_decision: requires 0 < lp_dist(a,b) <= 2");
  return detail::two_hop_witness(a, b, spec, tol).has_value();
}

// Multistart penalty search for a k-hop witness.  "not found" is not a proof
// of impossibility; every returned path has passed the exact validator.
inline std::optional<WitnessPath> near_search(const LayerPoint& a, const LayerPoint& b, int k,
                                              const LayerSpec& spec, const HopConfig& cfg = {},
                                              const Tolerance& tol = {}) {
  spec.require_smooth("near_search");
  const double dist = lp_dist(a, b, spec);
  if (k < 1) throw std::invalid_argument("near_search: k must be >= 1");
  if (k == 1) {
    if (std::abs(dist - 1.0) <= tol.abs_tol) return WitnessPath{{a, b}};
    return std::nullopt;
  }
  if (dist > static_cast<double>(k) + tol.abs_tol) return std::nullopt;

  ChainSolveOptions opts;
  opts.target_residual = std::min(1e-11, tol.abs_tol * 0.01);

  auto attempt = [&](const std::vector<LayerPoint>& init) -> std::optional<WitnessPath> {
    const auto res = solve_unit_path(a, b, k, spec, init, opts);
    if (!res.ok) return std::nullopt;
    const auto chk = check_witness(res.vertices, spec, tol, k);
    if (!chk.ok) return std::nullopt;
    return WitnessPath{res.vertices};
  };

  // Structured starts: straight interpolation and two sawtooth tilts.
  auto interp = [&](double zig) {
    std::vector<LayerPoint> init;
    for (int i = 1; i < k; ++i) {
      const double t = static_cast<double>(i) / k;
      LayerPoint q;
      q.h.resize(spec.n);
      q.v.resize(spec.m);
      for (int c = 0; c < spec.n; ++c) q.h[c] = a.h[c] + t * (b.h[c] - a.h[c]);
      for (int c = 0; c < spec.m; ++c) {
        const double lin = a.v[c] + t * (b.v[c] - a.v[c]);
        const double corner = (i % 2 == 1) ? spec.eps : 0.0;
        q.v[c] = std::clamp((1.0 - zig) * lin + zig * corner, 0.0, spec.eps);
      }
      init.push_back(std::move(q));
    }
    return init;
  };
  for (double zig : {0.0, 0.35, 0.7}) {
    if (auto got = attempt(interp(zig))) return got;
  }

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    auto rng = rng_stream(cfg.seed, static_cast<std::uint64_t>(restart) + 17);
    std::uniform_real_distribution<double> uy(0.0, spec.eps);
    std::normal_distribution<double> nh(0.0, 0.75);
    std::vector<LayerPoint> init;
    for (int i = 1; i < k; ++i) {
      const double t = static_cast<double>(i) / k;
      LayerPoint q;
      q.h.resize(spec.n);
      q.v.resize(spec.m);
      for (int c = 0; c < spec.n; ++c) q.h[c] = a.h[c] + t * (b.h[c] - a.h[c]) + nh(rng);
      for (int c = 0; c < spec.m; ++c) q.v[c] = uy(rng);
      init.push_back(std::move(q));
    }
    if (auto got = attempt(init)) return got;
  }
  return std::nullopt;
}

struct HopResult {
  HopInterval interval;
  std::optional<WitnessPath> witness;
};

// Certified interval for the hop distance, exact with a witness whenever the
// regime allows it: coincident points, unit edges, the two-hop geometry, the
// far-pair ceiling formula, or a validated near-search witness meeting the
// lower bound.
inline HopResult hop_distance(const LayerPoint& a, const LayerPoint& b, const LayerSpec& spec,
                              const HopConfig& cfg = {}, const Tolerance& tol = {}) {
  spec.require_smooth("hop_distance");
  if (!in_layer(a, spec, tol) || !in_layer(b, spec, tol))
    throw std::invalid_argument("hop_distance: endpoints must lie in the layer");
  const double dist = lp_dist(a, b, spec);
  HopResult out;

  if (dist <= tol.abs_tol) {
    out.interval = {0, 0, true};
    out.witness = WitnessPath{{a}};
    return out;
  }
  if (std::abs(dist - 1.0) <= tol.abs_tol) {
    out.interval = {1, 1, true};
    out.witness = WitnessPath{{a, b}};
    return out;
  }

  if (dist <= 2.0 + tol.abs_tol) {
    // A pair strictly closer than a unit hop still needs at least two hops.
    if (auto z = detail::two_hop_witness(a, b, spec, tol)) {
      out.interval = {2, 2, true};
      out.witness = WitnessPath{{a, *z, b}};
      return out;
    }
    // The two-hop sweep is exhaustive except for n = 1 with m >= 2, where a
    // miss must not be promoted into a certified lower bound.
    const bool conclusive = spec.n >= 2 || spec.m == 1;
    long long lower = conclusive ? 3 : 2;
    if (spec.n == 1) lower = std::max(lower, strip_advance_lower_bound(a, b, spec, tol));
    out.interval = {lower, std::nullopt, false};
    const long long k_max = std::min<long long>(cfg.near_budget, lower + 4);
    for (long long k = std::max(lower, 2ll); k <= k_max; ++k) {
      if (auto w = near_search(a, b, static_cast<int>(k), spec, cfg, tol)) {
        out.interval.upper = k;
        out.interval.exact = (k == lower);
        out.witness = std::move(w);
        break;
      }
    }
    return out;
  }

  const double threshold = resolve_far_threshold(spec, cfg);
  long long lower = ceil_int(dist, tol);
  if (dist > threshold) {
    auto w = far_witness_path(a, b, spec, cfg, tol);
    out.interval = {lower, lower, true};
    out.witness = std::move(w);
    return out;
  }

  if (spec.n == 1) lower = std::max(lower, strip_advance_lower_bound(a, b, spec, tol));
  out.interval = {lower, std::nullopt, false};
  const long long k_max = std::min<long long>(cfg.near_budget, lower + 4);
  for (long long k = lower; k <= k_max; ++k) {
    if (auto w = near_search(a, b, static_cast<int>(k), spec, cfg, tol)) {
      out.interval.upper = k;
      out.interval.exact = (k == lower);
      out.witness = std::move(w);
      break;
    }
  }
  return out;
}

}  // namespace layergraph
