#pragma once

// Seeded RNG streams and a damped least-squares solver for unit-edge systems:
// given fixed or free endpoints, move intermediate vertices until every edge
// has lp length 1 and every vertex sits inside the layer.  Callers must gate
// results through an explicit validator; a solver "success" is only a
// candidate.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "layergraph/core.hpp"

namespace layergraph {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Independent stream for (seed, stream_id); keeps multistart restarts and
// batch jobs decorrelated while staying reproducible.
inline std::mt19937_64 rng_stream(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t s = seed ^ (0x5851f42d4c957f2dull * (stream_id + 1));
  const std::uint64_t a = splitmix64(s);
  const std::uint64_t b = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

struct ChainSolveOptions {
  int max_iterations = 160;
  double target_residual = 1e-11;  // max |edge length - 1| and slab violation
  double slab_weight = 4.0;
};

struct ChainSolveResult {
  bool ok = false;
  std::vector<LayerPoint> vertices;
  double max_residual = std::numeric_limits<double>::infinity();
};

namespace detail {

class ChainSystem {
 public:
  // Path mode: endpoints fixed, k-1 free vertices.  Cycle mode: k free
  // vertices, edges wrap around.
  ChainSystem(const LayerSpec& spec, bool closed, LayerPoint a, LayerPoint b, int edges)
      : spec_(spec), closed_(closed), a_(std::move(a)), b_(std::move(b)), edges_(edges) {
    free_count_ = closed_ ? edges_ : edges_ - 1;
    dim_ = spec_.dim();
  }

  [[nodiscard]] int free_count() const { return free_count_; }
  [[nodiscard]] int vars() const { return free_count_ * dim_; }

  [[nodiscard]] std::vector<LayerPoint> assemble(std::span<const double> x) const {
    std::vector<LayerPoint> verts;
    verts.reserve(static_cast<std::size_t>(edges_) + (closed_ ? 0 : 1));
    if (!closed_) verts.push_back(a_);
    for (int i = 0; i < free_count_; ++i)
      verts.push_back(unflatten(x.subspan(static_cast<std::size_t>(i) * dim_, dim_), spec_));
    if (!closed_) verts.push_back(b_);
    return verts;
  }

  // Residuals: one per edge (lp length - 1), plus hinge terms for every
  // vertical coordinate of a free vertex that leaves [0, eps].
  void residuals(std::span<const double> x, std::vector<double>& r,
                 const ChainSolveOptions& opts) const {
    const auto verts = assemble(x);
    const int vcount = static_cast<int>(verts.size());
    r.clear();
    for (int e = 0; e < edges_; ++e) {
      const auto& u = verts[e];
      const auto& w = verts[(e + 1) % vcount];
      r.push_back(lp_dist(u, w, spec_) - 1.0);
    }
    const int offset = closed_ ? 0 : 1;
    for (int i = 0; i < free_count_; ++i) {
      const auto& v = verts[i + offset].v;
      for (int j = 0; j < spec_.m; ++j) {
        const double y = v[j];
        r.push_back(opts.slab_weight * std::max(0.0, -y));
        r.push_back(opts.slab_weight * std::max(0.0, y - spec_.eps));
      }
    }
  }

  [[nodiscard]] const LayerSpec& spec() const { return spec_; }
  [[nodiscard]] bool closed() const { return closed_; }
  [[nodiscard]] int edges() const { return edges_; }

 private:
  LayerSpec spec_;
  bool closed_;
  LayerPoint a_, b_;
  int edges_;
  int free_count_ = 0;
  int dim_ = 0;
};

inline double cost_of(const std::vector<double>& r) {
  double c = 0.0;
  for (double v : r) c += v * v;
  return c;
}

// Solves the normal equations (J^T J + lambda diag) dx = -J^T r in place.
inline bool solve_spd(std::vector<std::vector<double>>& a, std::vector<double>& b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    if (std::abs(a[pivot][col]) < 1e-14) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col) continue;
      const double f = a[row][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[row][c] -= f * a[col][c];
      b[row] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return true;
}

inline ChainSolveResult levenberg_solve(const ChainSystem& sys, std::vector<double> x,
                                        const ChainSolveOptions& opts) {
  const int nvars = sys.vars();
  std::vector<double> r, r_trial, x_trial(nvars);
  sys.residuals(x, r, opts);
  double cost = cost_of(r);
  const int nres = static_cast<int>(r.size());

  std::vector<std::vector<double>> jac(nres, std::vector<double>(nvars, 0.0));
  double lambda = 1e-3;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    double max_abs = 0.0;
    for (double v : r) max_abs = std::max(max_abs, std::abs(v));
    if (max_abs < opts.target_residual) break;

    // Forward-difference Jacobian; residuals are cheap and dimensions small.
    const double step = 1e-7;
    for (int c = 0; c < nvars; ++c) {
      const double saved = x[c];
      x[c] = saved + step;
      sys.residuals(x, r_trial, opts);
      x[c] = saved;
      for (int rr = 0; rr < nres; ++rr) jac[rr][c] = (r_trial[rr] - r[rr]) / step;
    }

    std::vector<std::vector<double>> jtj(nvars, std::vector<double>(nvars, 0.0));
    std::vector<double> jtr(nvars, 0.0);
    for (int rr = 0; rr < nres; ++rr) {
      for (int c1 = 0; c1 < nvars; ++c1) {
        const double jv = jac[rr][c1];
        if (jv == 0.0) continue;
        jtr[c1] += jv * r[rr];
        for (int c2 = c1; c2 < nvars; ++c2) jtj[c1][c2] += jv * jac[rr][c2];
      }
    }
    for (int c1 = 0; c1 < nvars; ++c1)
      for (int c2 = 0; c2 < c1; ++c2) jtj[c1][c2] = jtj[c2][c1];

    bool stepped = false;
    for (int attempt = 0; attempt < 8 && !stepped; ++attempt) {
      auto lhs = jtj;
      for (int c = 0; c < nvars; ++c) lhs[c][c] += lambda * (1.0 + jtj[c][c]);
      std::vector<double> rhs(nvars);
      for (int c = 0; c < nvars; ++c) rhs[c] = -jtr[c];
      if (solve_spd(lhs, rhs)) {
        for (int c = 0; c < nvars; ++c) x_trial[c] = x[c] + rhs[c];
        sys.residuals(x_trial, r_trial, opts);
        const double trial_cost = cost_of(r_trial);
        if (trial_cost < cost) {
          x = x_trial;
          r = r_trial;
          cost = trial_cost;
          lambda = std::max(lambda * 0.35, 1e-12);
          stepped = true;
        }
      }
      if (!stepped) lambda *= 8.0;
    }
    if (!stepped) break;  // stalled
  }

  ChainSolveResult out;
  out.vertices = sys.assemble(x);
  // Snap tiny slab violations onto the boundary, then re-measure.
  for (auto& v : out.vertices)
    for (double& y : v.v) {
      if (y < 0.0 && y > -opts.target_residual) y = 0.0;
      if (y > sys.spec().eps && y < sys.spec().eps + opts.target_residual) y = sys.spec().eps;
    }
  double worst = 0.0;
  const int vcount = static_cast<int>(out.vertices.size());
  for (int e = 0; e < sys.edges(); ++e) {
    const double len = lp_dist(out.vertices[e], out.vertices[(e + 1) % vcount], sys.spec());
    worst = std::max(worst, std::abs(len - 1.0));
  }
  for (const auto& v : out.vertices)
    for (double y : v.v) worst = std::max(worst, std::max(0.0 - y, y - sys.spec().eps));
  out.max_residual = worst;
  out.ok = worst <= opts.target_residual * 4.0;
  return out;
}

}  // namespace detail

// Unit-edge path solve with fixed endpoints and k-1 free vertices.
inline ChainSolveResult solve_unit_path(const LayerPoint& a, const LayerPoint& b, int k,
                                        const LayerSpec& spec,
                                        const std::vector<LayerPoint>& init,
                                        const ChainSolveOptions& opts = {}) {
  detail::ChainSystem sys(spec, false, a, b, k);
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(sys.vars()));
  for (const auto& pt : init) {
    auto flat = flatten(pt);
    x.insert(x.end(), flat.begin(), flat.end());
  }
  if (static_cast<int>(x.size()) != sys.vars())
    throw std::invalid_argument("solve_unit_path: init must provide k-1 vertices");
  return detail::levenberg_solve(sys, std::move(x), opts);
}

// Closed unit-edge cycle solve over k free vertices.
inline ChainSolveResult solve_unit_cycle(int k, const LayerSpec& spec,
                                         const std::vector<LayerPoint>& init,
                                         const ChainSolveOptions& opts = {}) {
  detail::ChainSystem sys(spec, true, LayerPoint{}, LayerPoint{}, k);
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(sys.vars()));
  for (const auto& pt : init) {
    auto flat = flatten(pt);
    x.insert(x.end(), flat.begin(), flat.end());
  }
  if (static_cast<int>(x.size()) != sys.vars())
    throw std::invalid_argument("solve_unit_cycle: init must provide k vertices");
  return detail::levenberg_solve(sys, std::move(x), opts);
}

}  // namespace layergraph
