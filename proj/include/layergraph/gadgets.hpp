#pragma once

// Combinatorial-geometric gadgets of planar strips: (N,M)-combs and their
// width thresholds, modified combs confined to the Delta region, m-sandwiches
// with their border points, and odd-cycle embeddings.  Gadget existence
// predicates compare widths against exact rational squares whenever the
// inputs are rational.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "layergraph/core.hpp"
#include "layergraph/hop.hpp"
#include "layergraph/optimize.hpp"
#include "layergraph/rational.hpp"

namespace layergraph {

struct Comb {
  std::vector<LayerPoint> a;  // N+1 points on one horizontal line
  std::vector<LayerPoint> b;  // M+1 points, b0 = a0 and bM = aN
  std::vector<LayerPoint> c;  // M tooth apexes, alternating with the b chain
  int N = 0;
  int M = 0;
};

inline void check_comb_params(int N, int M) {
  if (N < 1 || M < 1) throw std::invalid_argument("comb: N and M must be >= 1");
  if (2 * M <= N) throw std::invalid_argument("comb: requires 2M > N");
}

// Threshold width sqrt(1 - N^2 / (4 M^2)) below which no (N,M)-comb fits.
inline double comb_min_width(int N, int M) {
  check_comb_params(N, M);
  const double nn = static_cast<double>(N), mm = static_cast<double>(M);
  return std::sqrt(1.0 - nn * nn / (4.0 * mm * mm));
}

// Exact square of the threshold: (4M^2 - N^2) / (4M^2).
inline Rational comb_min_width_squared(int N, int M) {
  check_comb_params(N, M);
  const BigInt nn = N, mm = M;
  return Rational(4 * mm * mm - nn * nn, 4 * mm * mm);
}

// Reduced symbolic form "s*sqrt(r)/d" of sqrt(4M^2 - N^2) / (2M).
inline std::string comb_threshold_string(int N, int M) {
  check_comb_params(N, M);
  long long k = 4ll * M * M - 1ll * N * N;
  long long square = 1;
  for (long long f = 2; f * f <= k; ++f) {
    while (k % (f * f) == 0) {
      k /= f * f;
      square *= f;
    }
  }
  long long den = 2ll * M;
  const long long g = std::gcd(square, den);
  square /= g;
  den /= g;
  std::string out;
  if (k == 1) {
    out = std::to_string(square);
  } else {
    out = (square == 1 ? "" : std::to_string(square) + "*");
    out += "sqrt(" + std::to_string(k) + ")";
  }
  if (den != 1) out += "/" + std::to_string(den);
  return out;
}

inline bool comb_exists(int N, int M, double eps) {
  check_comb_params(N, M);
  if (!(eps > 0.0) || eps >= 1.0)
    throw std::invalid_argument("comb_exists: requires 0 < eps < 1 (use modified combs beyond)");
  // Squared comparison with a snap band absorbing the sqrt rounding of
  // boundary inputs such as sqrt(3)/2.
  const double lhs = eps * eps;
  const double rhs = comb_min_width_squared(N, M).to_double();
  return lhs >= rhs - 1e-12;
}

inline bool comb_exists(int N, int M, const Rational& eps) {
  check_comb_params(N, M);
  if (!(eps > Rational(0)) || eps >= Rational(1))
    throw std::invalid_argument("comb_exists: requires 0 < eps < 1 (use modified combs beyond)");
  return eps.squared() >= comb_min_width_squared(N, M);
}

// The extreme comb: a and b chains share the baseline, b splits it into M
// equal parts, apexes sit at the threshold height.
inline Comb build_extreme_comb(int N, int M, double eps) {
  if (!comb_exists(N, M, eps))
    throw std::invalid_argument("build_extreme_comb: no (N,M)-comb exists at this width");
  const double height = comb_min_width(N, M);
  Comb comb;
  comb.N = N;
  comb.M = M;
  for (int i = 0; i <= N; ++i) comb.a.push_back(strip_point(static_cast<double>(i), 0.0));
  const double step = static_cast<double>(N) / static_cast<double>(M);
  for (int j = 0; j <= M; ++j) comb.b.push_back(strip_point(step * j, 0.0));
  for (int j = 1; j <= M; ++j) comb.c.push_back(strip_point(step * (j - 0.5), height));
  comb.b.front() = comb.a.front();
  comb.b.back() = comb.a.back();
  return comb;
}

struct CombReport {
  bool valid = true;
  std::vector<std::string> violations;
  bool within_stated_regime = true;  // M > N; weaker combs are flagged, not rejected
  explicit operator bool() const { return valid; }
  [[nodiscard]] std::string first() const { return violations.empty() ? "" : violations.front(); }
};

// Checks the comb clauses: (i) collinear horizontal a-chain, (ii) unit
// a-steps, (iii) shared endpoints, (iv) unit zigzag, (v) interior
// projections, (vi) strict projection interleaving; plus layer membership
// and distinctness within each family.
inline CombReport validate_comb(const Comb& comb, const LayerSpec& spec, const Tolerance& tol = {}) {
  CombReport rep;
  auto fail = [&rep](const std::string& why) {
    rep.valid = false;
    rep.violations.push_back(why);
  };
  const int N = comb.N, M = comb.M;
  rep.within_stated_regime = M > N;
  if (static_cast<int>(comb.a.size()) != N + 1 || static_cast<int>(comb.b.size()) != M + 1 ||
      static_cast<int>(comb.c.size()) != M) {
    fail("size: expected N+1 a-points, M+1 b-points, M c-points");
    return rep;
  }
  const double strict = 2.0 * tol.abs_tol;  // strict clauses need margin beyond the snap band

  auto all_points = [&]() {
    std::vector<const LayerPoint*> pts;
    for (const auto& q : comb.a) pts.push_back(&q);
    for (const auto& q : comb.b) pts.push_back(&q);
    for (const auto& q : comb.c) pts.push_back(&q);
    return pts;
  };
  for (const auto* q : all_points())
    if (!in_layer(*q, spec, tol)) {
      fail("membership: point outside the strip");
      return rep;
    }
  auto distinct_family = [&](const std::vector<LayerPoint>& fam, const char* name) {
    for (std::size_t i = 0; i < fam.size(); ++i)
      for (std::size_t j = i + 1; j < fam.size(); ++j)
        if (lp_dist(fam[i], fam[j], spec) <= tol.abs_tol)
          fail(std::string("distinct: repeated point in ") + name);
  };
  distinct_family(comb.a, "a");
  distinct_family(comb.b, "b");
  distinct_family(comb.c, "c");
  if (!rep.valid) return rep;

  // (i)
  for (int i = 1; i <= N; ++i)
    if (std::abs(comb.a[i].v[0] - comb.a[0].v[0]) > tol.abs_tol) {
      fail("(i): a-points are not on one horizontal line");
      break;
    }
  // (ii)
  for (int i = 0; i < N; ++i)
    if (std::abs(lp_dist(comb.a[i], comb.a[i + 1], spec) - 1.0) > tol.abs_tol) {
      fail("(ii): consecutive a-distance is not 1");
      break;
    }
  // (iii)
  if (lp_dist(comb.a.front(), comb.b.front(), spec) > tol.abs_tol ||
      lp_dist(comb.a.back(), comb.b.back(), spec) > tol.abs_tol)
    fail("(iii): endpoints b0 = a0, bM = aN violated");
  // (iv): b0, c1, b1, c2, ..., cM, bM all unit steps
  for (int j = 1; j <= M; ++j) {
    if (std::abs(lp_dist(comb.b[j - 1], comb.c[j - 1], spec) - 1.0) > tol.abs_tol ||
        std::abs(lp_dist(comb.c[j - 1], comb.b[j], spec) - 1.0) > tol.abs_tol) {
      fail("(iv): zigzag step is not unit length");
      break;
    }
  }
  // (v): interior projections within the open span of the a-chain
  {
    const double lo = std::min(comb.a.front().h[0], comb.a.back().h[0]);
    const double hi = std::max(comb.a.front().h[0], comb.a.back().h[0]);
    auto interior = [&](const LayerPoint& q) {
      return q.h[0] > lo + strict && q.h[0] < hi - strict;
    };
    for (int j = 1; j < M; ++j)
      if (!interior(comb.b[j]) || !interior(comb.c[j - 1])) {
        fail("(v): projection not strictly inside the a-span");
        break;
      }
    if (rep.valid && !interior(comb.c[M - 1])) fail("(v): pr(c_M) not strictly inside the a-span");
  }
  // (vi): strict interleaving of b and c projections
  for (int j = 1; j < M; ++j) {
    const double lo = std::min(comb.b[j - 1].h[0], comb.b[j + 1].h[0]);
    const double hi = std::max(comb.b[j - 1].h[0], comb.b[j + 1].h[0]);
    if (!(comb.b[j].h[0] > lo + strict && comb.b[j].h[0] < hi - strict)) {
      fail("(vi): pr(b_i) not strictly between its neighbours");
      break;
    }
  }
  for (int j = 1; j <= M; ++j) {
    const double lo = std::min(comb.b[j - 1].h[0], comb.b[j].h[0]);
    const double hi = std::max(comb.b[j - 1].h[0], comb.b[j].h[0]);
    if (!(comb.c[j - 1].h[0] > lo + strict && comb.c[j - 1].h[0] < hi - strict)) {
      fail("(vi): pr(c_i) not strictly between pr(b_{i-1}) and pr(b_i)");
      break;
    }
  }
  return rep;
}

struct WidthSignature {
  long long integer_part = 0;
  double fractional_part = 0.0;
};

inline bool modified_comb_exists(int N, int M, double eps) {
  check_comb_params(N, M);
  const double fl = std::floor(eps);
  if (fl < 1.0) throw std::invalid_argument("modified_comb_exists: requires eps >= 1 (use comb_exists)");
  const double delta = eps - fl;
  if (!(delta > 0.0))
    throw std::invalid_argument("modified_comb_exists: fractional part of eps must be positive");
  const double rhs = comb_min_width_squared(N, M).to_double();
  return delta * delta >= rhs - 1e-12;
}

inline bool modified_comb_exists(int N, int M, const Rational& eps) {
  check_comb_params(N, M);
  if (eps.floor_big() < 1)
    throw std::invalid_argument("modified_comb_exists: requires eps >= 1 (use comb_exists)");
  const Rational delta = eps.fractional_part();
  if (!(delta > Rational(0)))
    throw std::invalid_argument("modified_comb_exists: fractional part of eps must be positive");
  return delta.squared() >= comb_min_width_squared(N, M);
}

// Membership in Delta = [0, delta) on the bottom piece, (m, eps] on the top.
inline bool delta_region_contains(const LayerPoint& x, const WidthSignature& sig) {
  if (x.v.size() != 1) throw std::invalid_argument("delta_region_contains: planar strips only");
  const double y = x.v[0];
  const double delta = sig.fractional_part;
  const double mi = static_cast<double>(sig.integer_part);
  const double eps = mi + delta;
  return (y >= 0.0 && y < delta) || (y > mi && y <= eps);
}

// Extreme comb flipped into the boundary band: apexes on a boundary line of
// the strip, chains at the threshold height inside the Delta region.  With
// mirror = true the comb is reflected into the top band.
inline Comb build_modified_comb(int N, int M, double eps, bool mirror = false) {
  if (!modified_comb_exists(N, M, eps))
    throw std::invalid_argument("build_modified_comb: no modified (N,M)-comb exists at this width");
  const double height = comb_min_width(N, M);
  Comb comb = build_extreme_comb(N, M, std::nextafter(1.0, 0.0));  // geometry only; re-placed below
  auto place = [&](double y_of_base, double y_of_apex) {
    for (auto& q : comb.a) q.v[0] = y_of_base;
    for (auto& q : comb.b) q.v[0] = y_of_base;
    for (auto& q : comb.c) q.v[0] = y_of_apex;
  };
  if (!mirror) {
    place(height, 0.0);  // teeth hang from the chain onto the bottom boundary
  } else {
    place(eps - height, eps);
  }
  const WidthSignature sig{static_cast<long long>(std::floor(eps)), eps - std::floor(eps)};
  for (const auto* fam : {&comb.a, &comb.b, &comb.c})
    for (const auto& q : *fam)
      if (!delta_region_contains(q, sig))
        throw std::invalid_argument(
            "build_modified_comb: width sits exactly on the threshold; the comb touches the "
            "closed edge of the Delta region");
  return comb;
}

struct Sandwich {
  LayerPoint origin;   // shift vector; bottom-left lattice point
  int rows = 0;        // vertical point count is rows + 1
  int half_width = 8;  // window columns span [-half_width, half_width]
};

inline bool sandwich_fits(int rows, double eps, const Tolerance& tol = {}) {
  if (rows < 0) throw std::invalid_argument("sandwich_fits: rows must be >= 0");
  return static_cast<double>(rows) <= eps + tol.abs_tol;
}

inline Sandwich build_sandwich(int rows, double eps, const LayerPoint& shift, int half_width = 8,
                               const Tolerance& tol = {}) {
  if (!sandwich_fits(rows, eps, tol))
    throw std::invalid_argument("build_sandwich: vertical extent exceeds the width");
  if (shift.v.size() != 1 || shift.h.size() != 1)
    throw std::invalid_argument("build_sandwich: planar shift expected");
  if (shift.v[0] < -tol.abs_tol || shift.v[0] + rows > eps + tol.abs_tol)
    throw std::invalid_argument("build_sandwich: shifted rows leave the strip");
  Sandwich s;
  s.origin = shift;
  s.rows = rows;
  s.half_width = half_width;
  return s;
}

inline std::vector<LayerPoint> sandwich_points(const Sandwich& s) {
  std::vector<LayerPoint> pts;
  for (int j = -s.half_width; j <= s.half_width; ++j)
    for (int k = 0; k <= s.rows; ++k)
      pts.push_back(strip_point(s.origin.h[0] + j, s.origin.v[0] + k));
  return pts;
}

// Border points: members of the sandwich that do not lie strictly between two
// other members of their vertical column.  For rows <= 1 every point
// qualifies; otherwise exactly the top and bottom rows do.
inline std::vector<LayerPoint> border_points(const Sandwich& s) {
  std::vector<LayerPoint> pts;
  for (int j = -s.half_width; j <= s.half_width; ++j) {
    if (s.rows <= 1) {
      for (int k = 0; k <= s.rows; ++k)
        pts.push_back(strip_point(s.origin.h[0] + j, s.origin.v[0] + k));
    } else {
      pts.push_back(strip_point(s.origin.h[0] + j, s.origin.v[0]));
      pts.push_back(strip_point(s.origin.h[0] + j, s.origin.v[0] + s.rows));
    }
  }
  return pts;
}

struct CycleEmbedding {
  int k = 0;
  std::vector<LayerPoint> vertices;
};

inline bool validate_cycle(const CycleEmbedding& cyc, const LayerSpec& spec,
                           const Tolerance& tol = {}) {
  if (static_cast<int>(cyc.vertices.size()) != cyc.k) return false;
  const auto chk = check_witness(cyc.vertices, spec, tol, cyc.k, /*closed=*/true);
  if (!chk.ok) return false;
  for (std::size_t i = 0; i < cyc.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < cyc.vertices.size(); ++j)
      if (lp_dist(cyc.vertices[i], cyc.vertices[j], spec) < 1e-6) return false;
  return true;
}

namespace detail {

inline std::vector<LayerPoint> cycle_polygon_init(int k, double eps, double squash) {
  // Regular polygon with unit-ish edges, squashed into the strip.
  std::vector<LayerPoint> init;
  const double r = 0.5 / std::sin(3.14159265358979323846 / k);
  for (int i = 0; i < k; ++i) {
    const double ang = 2.0 * 3.14159265358979323846 * i / k;
    const double x = r * std::cos(ang);
    const double y = 0.5 * eps + squash * r * std::sin(ang);
    init.push_back(strip_point(x, std::clamp(y, 0.0, eps)));
  }
  return init;
}

inline std::vector<LayerPoint> cycle_triangle_chain_init(int k, double eps) {
  // A near-extremal triangle with the closing edge expanded into a chain of
  // k - 2 gentle hops.
  std::vector<LayerPoint> init;
  const double h = std::min(eps, 0.9);
  init.push_back(strip_point(0.0, 0.0));
  init.push_back(strip_point(0.5, std::min(eps, std::sqrt(std::max(0.01, 1.0 - 0.25)))));
  init.push_back(strip_point(1.0, 0.0));
  const int rest = k - 3;
  for (int i = 1; i <= rest; ++i) {
    const double t = static_cast<double>(i) / (rest + 1);
    init.push_back(strip_point(1.0 - t, (i % 2 == 1) ? h * 0.25 : 0.05));
  }
  return init;
}

}  // namespace detail

// Embeds an odd k-cycle with unit edges in the strip of the given width, by
// multistart penalty minimisation; validated before returning.  A warm-start
// configuration (e.g. from a nearby width) can be supplied.
inline std::optional<CycleEmbedding> cycle_embeds(int k, double eps, const HopConfig& cfg = {},
                                                  const Tolerance& tol = {},
                                                  const std::vector<LayerPoint>* warm = nullptr) {
  if (k < 3 || k % 2 == 0)
    throw std::invalid_argument("cycle_embeds: k must be an odd integer >= 3");
  if (!(eps > 0.0)) throw std::invalid_argument("cycle_embeds: eps must be positive");
  const LayerSpec spec = strip_spec(eps);

  ChainSolveOptions opts;
  opts.target_residual = std::min(1e-11, tol.abs_tol * 0.01);
  opts.max_iterations = 240;

  auto attempt = [&](const std::vector<LayerPoint>& init) -> std::optional<CycleEmbedding> {
    auto res = solve_unit_cycle(k, spec, init, opts);
    if (!res.ok) return std::nullopt;
    CycleEmbedding cyc{k, std::move(res.vertices)};
    if (!validate_cycle(cyc, spec, tol)) return std::nullopt;
    return cyc;
  };

  if (warm != nullptr && static_cast<int>(warm->size()) == k) {
    auto scaled = *warm;
    for (auto& q : scaled) q.v[0] = std::clamp(q.v[0], 0.0, eps);
    if (auto got = attempt(scaled)) return got;
  }
  for (double squash : {1.0, 0.5, 0.2}) {
    if (auto got = attempt(detail::cycle_polygon_init(k, eps, squash))) return got;
  }
  if (auto got = attempt(detail::cycle_triangle_chain_init(k, eps))) return got;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    auto rng = rng_stream(cfg.seed, 7000 + static_cast<std::uint64_t>(restart));
    std::uniform_real_distribution<double> uy(0.0, eps);
    std::uniform_real_distribution<double> ux(-0.9, 0.9);
    std::vector<LayerPoint> init;
    double x = 0.0;
    for (int i = 0; i < k; ++i) {
      x += ux(rng);
      init.push_back(strip_point(x, uy(rng)));
    }
    if (auto got = attempt(init)) return got;
  }
  return std::nullopt;
}

// Smallest strip width containing an odd k-cycle, to 1e-3, by bisection on
// cycle_embeds with warm starts carried down from wider strips.
inline double odd_cycle_min_width(int k, const HopConfig& cfg = {}, const Tolerance& tol = {}) {
  if (k < 3 || k % 2 == 0)
    throw std::invalid_argument("odd_cycle_min_width: k must be an odd integer >= 3");
  double lo = 0.02, hi = 1.0;
  auto top = cycle_embeds(k, hi, cfg, tol);
  if (!top) throw std::runtime_error("odd_cycle_min_width: no embedding found at width 1");
  std::vector<LayerPoint> warm = top->vertices;
  if (cycle_embeds(k, lo, cfg, tol, &warm)) return lo;
  while (hi - lo > 2.5e-4) {
    const double mid = 0.5 * (lo + hi);
    if (auto got = cycle_embeds(k, mid, cfg, tol, &warm)) {
      hi = mid;
      warm = got->vertices;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace layergraph
