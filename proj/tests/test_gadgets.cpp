#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "layergraph/analysis.hpp"
#include "layergraph/gadgets.hpp"

using namespace layergraph;

TEST_CASE("comb thresholds") {
  CHECK(comb_min_width(4, 5) == Catch::Approx(std::sqrt(0.84)).epsilon(1e-14));
  CHECK(comb_min_width(3, 2) == Catch::Approx(std::sqrt(7.0) / 4.0).epsilon(1e-14));
  CHECK(comb_min_width(1, 1) == Catch::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(comb_min_width(4, 2), std::invalid_argument);  // needs 2M > N
  CHECK_THROWS_AS(comb_min_width(0, 1), std::invalid_argument);
}

TEST_CASE("comb existence") {
  CHECK(comb_exists(4, 5, 0.92));
  CHECK_FALSE(comb_exists(4, 5, 0.91));
  CHECK(comb_exists(1, 1, std::sqrt(3.0) / 2.0));  // boundary width, snap band
  CHECK_THROWS_AS(comb_exists(4, 5, 1.2), std::invalid_argument);
  CHECK(comb_exists(4, 5, Rational::parse("23/25").value()));
  CHECK_FALSE(comb_exists(4, 5, Rational::parse("91/100").value()));
}

TEST_CASE("extreme comb round trip") {
  for (auto [N, M] : {std::pair{1, 1}, {3, 2}, {4, 5}, {9, 10}}) {
    const double thr = comb_min_width(N, M);
    const double eps = std::min(thr + 1e-6, 1.0 - 1e-9);
    const auto comb = build_extreme_comb(N, M, eps);
    const auto rep = validate_comb(comb, strip_spec(eps));
    INFO("N=" << N << " M=" << M << " first=" << rep.first());
    CHECK(rep.valid);
    CHECK(rep.within_stated_regime == (M > N));
  }
}

TEST_CASE("threshold sharpness") {
  for (auto [N, M] : {std::pair{1, 1}, {3, 2}, {4, 5}, {9, 10}}) {
    const double thr = comb_min_width(N, M);
    CHECK(comb_exists(N, M, thr + 1e-6));
    CHECK_FALSE(comb_exists(N, M, thr - 1e-6));
    // Threshold matches the closed form.
    CHECK(thr == Catch::Approx(std::sqrt(1.0 - double(N) * N / (4.0 * M * M))).epsilon(1e-12));
  }
}

TEST_CASE("validator reports broken clauses") {
  auto comb = build_extreme_comb(4, 5, 0.92);
  comb.c[1].v[0] -= 0.1;
  const auto rep = validate_comb(comb, strip_spec(0.92));
  CHECK_FALSE(rep.valid);
  CHECK(rep.first().find("(iv)") != std::string::npos);

  auto comb2 = build_extreme_comb(4, 5, 0.92);
  std::swap(comb2.b[1], comb2.b[2]);
  const auto rep2 = validate_comb(comb2, strip_spec(0.92));
  CHECK_FALSE(rep2.valid);
  CHECK(rep2.first().find("(vi)") != std::string::npos);

  auto comb3 = build_extreme_comb(4, 5, 0.92);
  comb3.a[2].v[0] += 0.05;
  CHECK_FALSE(validate_comb(comb3, strip_spec(0.92)).valid);
}

TEST_CASE("tooth rectangle oracle") {
  // For a valid comb, some tooth spans at most N/M horizontally; its triangle
  // sits in a rectangle of height eps, and the distance from the rectangle
  // corner D to the apex dominates the diameter of the inner rectangle, which
  // dominates the unit side.
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> jitter(-0.004, 0.004);
  for (auto [N, M] : {std::pair{3, 2}, {4, 5}, {9, 10}}) {
    const double eps = std::min(comb_min_width(N, M) + 0.02, 1.0 - 1e-9);
    for (int trial = 0; trial < 25; ++trial) {
      auto comb = build_extreme_comb(N, M, eps);
      for (int j = 1; j < M; ++j) comb.b[j].h[0] += jitter(rng);
      for (int j = 0; j < M; ++j) {
        comb.c[j].h[0] += jitter(rng);
        comb.c[j].v[0] = std::min(eps, comb.c[j].v[0] + 0.01 + jitter(rng));
      }
      // Re-solder the zigzag to keep unit lengths: lift each apex exactly.
      bool ok = true;
      for (int j = 0; j < M; ++j) {
        const double half = 0.5 * std::abs(comb.b[j + 1].h[0] - comb.b[j].h[0]);
        const double mid = 0.5 * (comb.b[j + 1].h[0] + comb.b[j].h[0]);
        if (half > 1.0) {
          ok = false;
          break;
        }
        comb.c[j].h[0] = mid;
        comb.c[j].v[0] = std::sqrt(1.0 - half * half);
        if (comb.c[j].v[0] > eps) ok = false;
      }
      if (!ok) continue;
      const auto rep = validate_comb(comb, strip_spec(eps));
      if (!rep.valid) continue;

      double min_width = 1e9;
      int arg = 0;
      for (int j = 0; j < M; ++j) {
        const double w = std::abs(comb.b[j + 1].h[0] - comb.b[j].h[0]);
        if (w < min_width) {
          min_width = w;
          arg = j;
        }
      }
      CHECK(min_width <= double(N) / M + 1e-9);
      // Rectangle chain: the diagonal from the apex to the far base corner of
      // its enclosing rectangle dominates the unit tooth side.
      const auto& c = comb.c[arg];
      const double rect_left = std::min(comb.b[arg].h[0], comb.b[arg + 1].h[0]);
      const double rect_right = std::max(comb.b[arg].h[0], comb.b[arg + 1].h[0]);
      const double base_y = comb.b[arg].v[0];
      const double dx = std::max(std::abs(c.h[0] - rect_left), std::abs(c.h[0] - rect_right));
      CHECK(std::hypot(dx, c.v[0] - base_y) >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("modified combs") {
  CHECK(modified_comb_exists(4, 5, 1.92));
  CHECK_FALSE(modified_comb_exists(4, 5, 1.5));
  CHECK_THROWS_AS(modified_comb_exists(4, 5, 2.0), std::invalid_argument);  // zero fraction
  CHECK_THROWS_AS(modified_comb_exists(4, 5, 0.92), std::invalid_argument);

  const auto comb = build_modified_comb(4, 5, 1.92);
  const auto rep = validate_comb(comb, strip_spec(1.92));
  CHECK(rep.valid);
  const auto sig = width_signature(1.92);
  for (const auto* fam : {&comb.a, &comb.b, &comb.c})
    for (const auto& q : *fam) {
      CHECK(delta_region_contains(q, sig));
      CHECK(q.v[0] < 0.92);
    }

  const auto mirrored = build_modified_comb(4, 5, 1.92, true);
  CHECK(validate_comb(mirrored, strip_spec(1.92)).valid);
  for (const auto& q : mirrored.c) CHECK(q.v[0] == Catch::Approx(1.92));
  for (const auto* fam : {&mirrored.a, &mirrored.b, &mirrored.c})
    for (const auto& q : *fam) CHECK(delta_region_contains(q, sig));

  CHECK_THROWS_AS(build_modified_comb(4, 5, 1.5), std::invalid_argument);
}

TEST_CASE("delta region membership") {
  const auto sig = width_signature(1.9);
  CHECK(delta_region_contains(strip_point(0, 0.5), sig));
  CHECK_FALSE(delta_region_contains(strip_point(0, 0.9), sig));  // half-open at delta
  CHECK(delta_region_contains(strip_point(0, 1.5), sig));
  CHECK(delta_region_contains(strip_point(0, 1.9), sig));
  CHECK_FALSE(delta_region_contains(strip_point(0, 1.0), sig));
}

TEST_CASE("sandwich windows") {
  CHECK(sandwich_fits(1, 1.0));
  CHECK_FALSE(sandwich_fits(2, 1.9));
  for (double eps : {0.4, 1.3, 2.8}) CHECK(sandwich_fits(int(std::floor(eps)), eps));

  const auto s = build_sandwich(3, 3.2, strip_point(0.25, 0.1), 3);
  const auto pts = sandwich_points(s);
  CHECK(pts.size() == 7u * 4u);
  const auto spec = strip_spec(3.2);
  for (const auto& q : pts) CHECK(in_layer(q, spec));
  CHECK_THROWS_AS(build_sandwich(2, 1.9, strip_point(0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(build_sandwich(1, 1.5, strip_point(0, 0.8)), std::invalid_argument);
}

TEST_CASE("border points agree with the vertical betweenness scan") {
  for (int rows : {0, 1, 3, 5}) {
    const double eps = rows + 0.4;
    const auto s = build_sandwich(rows, eps, strip_point(-0.3, 0.2), 4);
    const auto pts = sandwich_points(s);
    const auto border = border_points(s);
    auto contains = [&](const LayerPoint& q) {
      for (const auto& bq : border)
        if (std::abs(bq.h[0] - q.h[0]) < 1e-9 && std::abs(bq.v[0] - q.v[0]) < 1e-9) return true;
      return false;
    };
    for (const auto& q : pts) {
      bool strictly_between = false;
      for (const auto& u : pts)
        for (const auto& w : pts) {
          if (std::abs(u.h[0] - q.h[0]) > 1e-9 || std::abs(w.h[0] - q.h[0]) > 1e-9) continue;
          if (u.v[0] < q.v[0] - 1e-9 && q.v[0] < w.v[0] - 1e-9) strictly_between = true;
        }
      CHECK(contains(q) == !strictly_between);
    }
    if (rows <= 1) CHECK(border.size() == pts.size());
  }
}

TEST_CASE("odd cycle embeddings") {
  CHECK_THROWS_AS(cycle_embeds(4, 0.8), std::invalid_argument);
  CHECK_THROWS_AS(cycle_embeds(1, 0.8), std::invalid_argument);

  const auto found = cycle_embeds(3, 0.9);
  REQUIRE(found.has_value());
  CHECK(validate_cycle(*found, strip_spec(0.9)));
  CHECK_FALSE(cycle_embeds(3, 0.8).has_value());
}

TEST_CASE("triangle threshold anchor") {
  const double w3 = odd_cycle_min_width(3);
  CHECK(w3 == Catch::Approx(std::sqrt(3.0) / 2.0).margin(1e-3));
  const double w5 = odd_cycle_min_width(5);
  CHECK(w5 <= w3 + 1e-9);
  CHECK(w5 < w3 - 1e-3);  // strictly thinner strips admit the 5-cycle
}
