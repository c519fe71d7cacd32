#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "leastres/error.hpp"
#include "leastres/prooflab.hpp"
#include "leastres/truncation.hpp"
#include "support.hpp"

using namespace leastres;
using leastres::testing::disc64;
using leastres::testing::random_roof;
using leastres::testing::unit_square;

namespace {

SupportProbe right_edge(const Domain &sq) { return make_probe(sq, {1, 0.5}, {1, 0}); }

// u is affine on each cell, so its maximum over a region sits at a cell vertex.
double cell_vertex_max(const ConcaveRoof &roof, const ConvexPolygon &region) {
  double best = -1.0;
  for (const auto &cell : cell_decomposition(roof, region).cells) {
    for (const auto &v : cell.region.vertices()) best = std::max(best, roof.value(v));
  }
  return best;
}

// Edge probe on the 64-gon at an edge where u(x0) >= 0.2 M, if any.
std::optional<SupportProbe> lifted_edge_probe(std::mt19937_64 &rng, const Domain &d, const ConcaveRoof &roof) {
  const std::size_t start = rng() % d.shape.size();
  for (std::size_t i = 0; i < d.shape.size(); ++i) {
    const SupportProbe p = edge_probe(d, (start + i) % d.shape.size());
    if (roof.value(p.x0) >= 0.2 * roof.height_cap()) return p;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("compress") {
  const Domain sq = unit_square();
  const SupportProbe p = right_edge(sq);
  const ConvexPolygon same = compress(sq.shape, p, 1.0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(same.vertex(i) == sq.shape.vertex(i));

  const ConvexPolygon half = compress(sq.shape, p, 0.5);
  // (0, 1) goes to (0, 0.75): depth kept, offset from the axis halved.
  bool found = false;
  for (const auto &v : half.vertices()) {
    if (std::abs(v.x) < 1e-15 && std::abs(v.y - 0.75) < 1e-15) found = true;
  }
  CHECK(found);
  CHECK(half.area() == doctest::Approx(0.5));

  const ConvexPolygon tri = ConvexPolygon::from_vertices({{0.2, 0.9}, {0.1, 0.1}, {0.9, 0.2}});
  const ConvexPolygon image = compress(tri, p, 0.5);
  CHECK(image.vertex(0).x == doctest::Approx(0.2));
  CHECK(image.vertex(0).y == doctest::Approx(0.7));

  CHECK_THROWS_AS(compress(sq.shape, p, 0.0), ValidationError);
  CHECK_THROWS_AS(compress(sq.shape, p, 1.5), ValidationError);

  std::mt19937_64 rng(9);
  const Domain disc = disc64();
  for (int trial = 0; trial < 200; ++trial) {
    const ConvexPolygon poly = leastres::testing::random_convex_polygon(rng);
    const SupportProbe q = edge_probe(disc, rng() % disc.shape.size());
    const double theta = trial % 2 == 0 ? 0.25 : leastres::testing::uniform(rng, 0.01, 1.0);
    const ConvexPolygon c = compress(poly, q, theta);
    CHECK(c.area() == doctest::Approx(theta * poly.area()).epsilon(1e-12));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2 before = poly.vertex(i) - q.x0;
      const Vec2 after = c.vertex(i) - q.x0;
      CHECK(dot(after, q.n) == doctest::Approx(dot(before, q.n)).epsilon(1e-12));
      CHECK(std::abs(dot(after, q.tangent()) - theta * dot(before, q.tangent())) <= 1e-12 * (1 + norm(before)));
    }
  }
}

TEST_CASE("envelope supremum: LP against oracles") {
  SUBCASE("axis-aligned square, grid hits the maximizer") {
    const Domain sq = unit_square();
    const SupportProbe p = right_edge(sq);
    const ConcaveRoof ramp({{{-1, 0}, 1}, {{0, -0.5}, 1.2}}, 1.0);
    const double lp = envelope_sup_lp(ramp, sq.shape);
    CHECK(lp == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(lp - envelope_sup_grid(ramp, sq.shape, p, 400)) <= 1e-6);
    const ConcaveRoof tent({{{2, 0}, 0}, {{-2, 0}, 2}}, 3.0);
    CHECK(envelope_sup_lp(tent, sq.shape) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("random roofs and regions") {
    std::mt19937_64 rng(12);
    const Domain disc = disc64();
    for (int trial = 0; trial < 100; ++trial) {
      const ConcaveRoof roof = random_roof(rng, disc);
      const ConvexPolygon region = trial % 2 == 0 ? disc.shape : leastres::testing::random_convex_polygon(rng);
      const double lp = envelope_sup_lp(roof, region);
      const double oracle = cell_vertex_max(roof, region);
      CHECK(lp == doctest::Approx(oracle).epsilon(1e-9));

      const SupportProbe p = edge_probe(disc, rng() % disc.shape.size());
      const double grid = envelope_sup_grid(roof, region, p, 400);
      CHECK(grid <= lp + 1e-12);
      double lipschitz = 0.0;
      for (const auto &pl : roof.planes()) lipschitz = std::max(lipschitz, norm(pl.g));
      // Every point of the region is within one lattice diagonal of a lattice point inside it.
      CHECK(lp - grid <= lipschitz * region.scale() * std::sqrt(2.0) * 2.0 / 399.0 + 1e-12);
    }
  }
}

TEST_CASE("frames in the cap-roof square scenario") {
  const Domain sq = unit_square();
  const SupportProbe p = right_edge(sq);
  const ConcaveRoof cap({}, 1.0);
  const auto newton = PressureModel::newton();

  const DiagnosticsFrame f8 = diagnostics_frame(cap, p, sq, newton, 8.0);
  CHECK(f8.z0 == 1.0);
  CHECK(f8.alpha_k == doctest::Approx(0.0));
  CHECK(std::abs(f8.beta_k) <= 1e-12);
  CHECK(f8.chord_lower == doctest::Approx(0.5));
  CHECK(f8.chord_upper == doctest::Approx(0.5));
  CHECK(f8.theta_k == 0.99);
  CHECK(f8.ur1 == 0.0);
  CHECK_FALSE(f8.degenerate);

  const DiagnosticsFrame f800 = diagnostics_frame(cap, p, sq, newton, 800.0);
  CHECK(f800.theta_k == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(f800.area_ratio == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(f800.area_ratio_bound == doctest::Approx(0.025).epsilon(1e-9));
  CHECK(f800.omega_k_area == doctest::Approx(1.0 / 800.0));
  REQUIRE(f800.omega_k_plus);
  CHECK(f800.omega_k_plus->area() == doctest::Approx(1.0 / 1600.0));
  CHECK(f800.tilde_inside_omega);

  const DiagnosticsFrame f5 = diagnostics_frame(cap, p, sq, newton, 1e5);
  CHECK(std::abs(f5.hk1 - 0.25) <= 0.1 * 0.25);
  const DiagnosticsFrame f2 = diagnostics_frame(cap, p, sq, newton, 1e2);
  CHECK(f5.hk2 >= 10 * f2.hk2);
  CHECK(f5.theta_k <= 0.1);

  // theta -> 0 while k a theta grows.
  double last_theta = 1.0, last_kat = 0.0;
  for (double k : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    const auto f = diagnostics_frame(cap, p, sq, newton, k);
    CHECK(f.theta_k < last_theta);
    CHECK(k * f.chord_lower * f.theta_k > last_kat);
    last_theta = f.theta_k;
    last_kat = k * f.chord_lower * f.theta_k;
  }

  CHECK_THROWS_AS(diagnostics_frame(ConcaveRoof({{{-1, 0}, 1}}, 1.0), p, sq, newton, 5.0), ValidationError);
  CHECK_THROWS_AS(diagnostics_frame(cap, p, sq, newton, 0.0), ValidationError);
}

TEST_CASE("ur1 decays for a tilted roof") {
  const Domain sq = unit_square();
  const SupportProbe p = right_edge(sq);
  const ConcaveRoof tilted({{{-0.5, 0.2}, 0.9}}, 1.0);
  const auto newton = PressureModel::newton();
  std::vector<double> ur1;
  for (double k : {1e2, 1e3, 1e4, 1e5}) ur1.push_back(diagnostics_frame(tilted, p, sq, newton, k).ur1);
  CHECK(ur1.front() > 0.0);
  for (std::size_t i = 1; i < ur1.size(); ++i) CHECK(ur1[i] <= ur1[i - 1]);
  CHECK(ur1.back() < 0.1 * ur1.front());
}

TEST_CASE("contact at a polygon corner") {
  const Domain sq = unit_square();
  const auto newton = PressureModel::newton();
  // Diagonal probe at a corner: both chords open linearly from zero.
  const double s = 1.0 / std::sqrt(2.0);
  const SupportProbe corner = support_probe(sq, {s, s});
  const auto f = diagnostics_frame(ConcaveRoof({}, 1.0), corner, sq, newton, 1e3);
  CHECK(f.z0 == 1.0);
  CHECK(f.chord_lower == doctest::Approx(1.0 / 2e3));
  CHECK(f.chord_upper == doctest::Approx(1.0 / 2e3));
  CHECK_FALSE(f.degenerate);

  // Edge normal with x0 at the edge's endpoint: nothing below the axis.
  const SupportProbe end = make_probe(sq, {1, 0}, {1, 0});
  const auto g = diagnostics_frame(ConcaveRoof({}, 1.0), end, sq, newton, 100.0);
  CHECK(g.chord_lower == 0.0);
  CHECK(g.chord_upper > 0.0);
  CHECK(g.degenerate);
  CHECK(g.theta_k == 0.99);
}

TEST_CASE("random roofs: proof inequalities and beta decay") {
  std::mt19937_64 rng(1234);
  const Domain disc = disc64();
  const std::vector<double> ks{1, 4, 16, 64, 256, 1024, 1e4, 1e5};
  int scenarios = 0;
  for (int trial = 0; trial < 60 && scenarios < 20; ++trial) {
    const ConcaveRoof roof = random_roof(rng, disc);
    const auto probe = lifted_edge_probe(rng, disc, roof);
    if (!probe) continue;
    ++scenarios;
    const auto model = trial % 2 == 0 ? PressureModel::newton() : PressureModel::tangential();
    double prev_alpha = std::numeric_limits<double>::infinity();
    for (const double k : ks) {
      const DiagnosticsFrame f = diagnostics_frame(roof, *probe, disc, model, k);
      CHECK(f.normalized_gain >= f.infinf_bound - 1e-9);
      if (f.omega_k_plus) CHECK(f.area_ratio >= f.area_ratio_bound - 1e-9);
      CHECK(f.beta_k <= f.alpha_k + 1e-9);
      // Nested Ω_k: the excess height can only shrink.
      CHECK(f.alpha_k <= prev_alpha + 1e-12);
      prev_alpha = f.alpha_k;
      CHECK(f.alpha_k == doctest::Approx(std::max(0.0, cell_vertex_max(roof, ConvexPolygon::from_vertices(f.omega_k)) - f.z0)).epsilon(1e-9));
      if (k == 1e5) CHECK(std::abs(f.beta_k) <= 1e-3);
    }
  }
  CHECK(scenarios == 20);
}
