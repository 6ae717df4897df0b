#pragma once

// Shared generators and test-side oracles, kept independent of the library
// code paths they are used to check.

#include <cmath>
#include <random>
#include <vector>

#include "layergraph/core.hpp"
#include "layergraph/optimize.hpp"

namespace testutil {

using layergraph::LayerPoint;
using layergraph::LayerSpec;

inline LayerPoint random_point(const LayerSpec& spec, std::mt19937_64& rng, double h_range = 8.0) {
  std::uniform_real_distribution<double> uh(-h_range, h_range);
  std::uniform_real_distribution<double> uv(0.0, spec.eps);
  LayerPoint pt;
  pt.h.resize(spec.n);
  pt.v.resize(spec.m);
  for (double& c : pt.h) c = uh(rng);
  for (double& c : pt.v) c = uv(rng);
  return pt;
}

// Pair at lp distance exactly `target`: pick both vertical coordinates inside
// the slab, then spend the remaining norm budget horizontally.
inline std::pair<LayerPoint, LayerPoint> pair_at_distance(const LayerSpec& spec, double target,
                                                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uv(0.0, spec.eps);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    LayerPoint a = random_point(spec, rng);
    std::vector<double> dv(spec.m);
    double vpow = 0.0;
    for (int j = 0; j < spec.m; ++j) {
      dv[j] = uv(rng) - a.v[j];
      vpow += std::pow(std::abs(dv[j]), spec.p);
    }
    const double tpow = std::pow(target, spec.p);
    if (vpow >= tpow) continue;
    std::vector<double> dh(spec.n);
    double nn = 0.0;
    while (nn < 1e-12) {
      for (double& c : dh) c = g(rng);
      nn = layergraph::lp_norm(dh, spec.p);
    }
    const double hlen = std::pow(tpow - vpow, 1.0 / spec.p);
    LayerPoint b = a;
    for (int i = 0; i < spec.n; ++i) b.h[i] = a.h[i] + hlen * dh[i] / nn;
    for (int j = 0; j < spec.m; ++j) b.v[j] = a.v[j] + dv[j];
    return {a, b};
  }
  throw std::runtime_error("pair_at_distance: generator failed");
}

// Strict-interior test by orientation signs, independent of the barycentric
// solve used by the library (n = 2 and n = 3 only).
inline int orient2(const std::vector<double>& a, const std::vector<double>& b,
                   const std::vector<double>& c) {
  const double det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  if (det > 1e-12) return 1;
  if (det < -1e-12) return -1;
  return 0;
}

inline bool interior_by_orientation2(const std::vector<std::vector<double>>& tri,
                                     const std::vector<double>& q) {
  const int s0 = orient2(tri[0], tri[1], q);
  const int s1 = orient2(tri[1], tri[2], q);
  const int s2 = orient2(tri[2], tri[0], q);
  if (s0 == 0 || s1 == 0 || s2 == 0) return false;
  return s0 == s1 && s1 == s2;
}

inline double det3(const double m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline int orient3(const std::vector<double>& a, const std::vector<double>& b,
                   const std::vector<double>& c, const std::vector<double>& d) {
  const double m[3][3] = {{b[0] - a[0], b[1] - a[1], b[2] - a[2]},
                          {c[0] - a[0], c[1] - a[1], c[2] - a[2]},
                          {d[0] - a[0], d[1] - a[1], d[2] - a[2]}};
  const double det = det3(m);
  if (det > 1e-12) return 1;
  if (det < -1e-12) return -1;
  return 0;
}

inline bool interior_by_orientation3(const std::vector<std::vector<double>>& tet,
                                     const std::vector<double>& q) {
  const int ref = orient3(tet[0], tet[1], tet[2], tet[3]);
  if (ref == 0) return false;
  const int s0 = orient3(q, tet[1], tet[2], tet[3]);
  const int s1 = orient3(tet[0], q, tet[2], tet[3]);
  const int s2 = orient3(tet[0], tet[1], q, tet[3]);
  const int s3 = orient3(tet[0], tet[1], tet[2], q);
  return s0 == ref && s1 == ref && s2 == ref && s3 == ref;
}

}  // namespace testutil
