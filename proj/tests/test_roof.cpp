#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "leastres/error.hpp"
#include "leastres/roof.hpp"
#include "support.hpp"

using namespace leastres;
using leastres::testing::disc64;
using leastres::testing::random_point_in;
using leastres::testing::random_roof;
using leastres::testing::unit_square;

namespace {

ConcaveRoof tent() { return ConcaveRoof({{{2, 0}, 0}, {{-2, 0}, 2}}, 1.0); }

ConcaveRoof ramp() { return ConcaveRoof({{{-1, 0}, 1}}, 1.0); }

// Plain min over all planes; shares nothing with the cell code.
double brute_min(const ConcaveRoof &roof, Point2 x) {
  double v = roof.height_cap();
  for (const auto &p : roof.planes()) v = std::min(v, p.g.x * x.x + p.g.y * x.y + p.c);
  return v;
}

}  // namespace

TEST_CASE("eval_height") {
  const Domain sq = unit_square();
  CHECK(eval_height(ConcaveRoof({}, 1.0), {0.3, 0.7}, sq) == 1.0);
  CHECK(eval_height(ramp(), {0.25, 0.5}, sq) == doctest::Approx(0.75));
  CHECK_THROWS_AS(eval_height(ramp(), {2, 2}, sq), ValidationError);
  CHECK_THROWS_AS(ConcaveRoof({}, -1.0), ValidationError);
  CHECK_THROWS_AS(ConcaveRoof({{{NAN, 0}, 1}}, 1.0), ValidationError);
  CHECK_NOTHROW(ConcaveRoof({}, 0.0));
}

TEST_CASE("gradient_ae") {
  const Domain sq = unit_square();
  auto g = gradient_ae(ConcaveRoof({}, 1.0), {0.4, 0.4}, sq);
  REQUIRE(g);
  CHECK(g->gradient == Vec2{0, 0});
  g = gradient_ae(tent(), {0.25, 0.5}, sq);
  REQUIRE(g);
  CHECK(g->gradient == Vec2{2, 0});
  CHECK(g->index == 0);
  CHECK_FALSE(gradient_ae(tent(), {0.5, 0.5}, sq));
  CHECK_THROWS_AS(gradient_ae(tent(), {1.5, 0.5}, sq), ValidationError);
}

TEST_CASE("cell_decomposition examples") {
  const Domain sq = unit_square();
  auto cells = cell_decomposition(ConcaveRoof({}, 1.0), sq).cells;
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].plane_index == 0);
  CHECK(cells[0].region.area() == doctest::Approx(1.0));

  cells = cell_decomposition(tent(), sq).cells;
  REQUIRE(cells.size() == 2);
  for (const auto &c : cells) CHECK(c.region.area() == doctest::Approx(0.5));
  CHECK(cells[0].region.centroid().x == doctest::Approx(0.25));
  CHECK(cells[1].region.centroid().x == doctest::Approx(0.75));

  cells = cell_decomposition(ConcaveRoof({{{0, 0}, 5}}, 1.0), sq).cells;
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].plane_index == 1);

  // Identical planes: the lower index wins.
  cells = cell_decomposition(ConcaveRoof({{{0, 0}, 0.5}, {{0, 0}, 0.5}}, 1.0), sq).cells;
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].plane_index == 0);
}

TEST_CASE("resistance_exact examples") {
  const Domain sq = unit_square();
  const auto newton = PressureModel::newton();
  CHECK(resistance_exact(ConcaveRoof({}, 1.0), sq, newton) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(resistance_exact(ramp(), sq, newton) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(resistance_exact(tent(), sq, newton) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("resistance_montecarlo examples") {
  const Domain sq = unit_square();
  const auto newton = PressureModel::newton();
  auto mc = resistance_montecarlo(ConcaveRoof({}, 1.0), sq, newton, 1000, 4);
  CHECK(mc.estimate == 1.0);
  CHECK(mc.standard_error == 0.0);
  mc = resistance_montecarlo(tent(), sq, newton, 1'000'000, 4);
  CHECK(std::abs(mc.estimate - 0.2) <= 3 * mc.standard_error);
  CHECK_THROWS_AS(resistance_montecarlo(tent(), sq, newton, 10, 4), ValidationError);

  const auto again = resistance_montecarlo(tent(), sq, newton, 1'000'000, 4);
  CHECK(again.estimate == mc.estimate);
}

TEST_CASE("boundary_max examples") {
  const Domain sq = unit_square();
  auto top = boundary_max(ConcaveRoof({}, 1.0), sq);
  CHECK(top.value == 1.0);
  top = boundary_max(tent(), sq);
  CHECK(top.value == doctest::Approx(1.0));
  CHECK(top.point.x == doctest::Approx(0.5));
  CHECK((std::abs(top.point.y) < 1e-12 || std::abs(top.point.y - 1.0) < 1e-12));
  top = boundary_max(ramp(), sq);
  CHECK(top.value == doctest::Approx(1.0));
  CHECK(top.point.x == doctest::Approx(0.0));
}

TEST_CASE("max_on_segment against dense sampling") {
  std::mt19937_64 rng(8);
  const Domain disc = disc64();
  for (int trial = 0; trial < 100; ++trial) {
    const ConcaveRoof roof = random_roof(rng, disc);
    const Point2 a = random_point_in(rng, disc.shape);
    const Point2 b = random_point_in(rng, disc.shape);
    const SegmentMax m = max_on_segment(roof, a, b);
    double sampled = 0.0;
    for (int i = 0; i <= 20000; ++i) sampled = std::max(sampled, brute_min(roof, a + (i / 20000.0) * (b - a)));
    CHECK(m.value >= sampled - 1e-12);
    // Piecewise linear with slopes bounded by the steepest plane.
    double lipschitz = 0.0;
    for (const auto &p : roof.planes()) lipschitz = std::max(lipschitz, norm(p.g));
    CHECK(m.value <= sampled + lipschitz * norm(b - a) / 20000.0 + 1e-12);
    CHECK(brute_min(roof, m.point) == doctest::Approx(m.value).epsilon(1e-12));
  }
}

TEST_CASE("project_feasible") {
  const Domain sq = unit_square();
  const ConcaveRoof raised = project_feasible(ConcaveRoof({{{-1, 0}, 0.5}}, 1.0), sq);
  REQUIRE(raised.planes().size() == 1);
  CHECK(raised.planes()[0].c == doctest::Approx(1.0));
  CHECK(is_feasible(raised, sq));

  const ConcaveRoof original = tent();
  const ConcaveRoof already = project_feasible(original, sq);
  CHECK(std::equal(already.planes().begin(), already.planes().end(), original.planes().begin(),
                   original.planes().end()));

  CHECK(project_feasible(ConcaveRoof({{{0, 0}, 7}}, 1.0), sq).planes().empty());
  CHECK_FALSE(is_feasible(ConcaveRoof({{{-1, 0}, 0.5}}, 1.0), sq));
}

TEST_CASE("random roofs: partition and cell optimality") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const Domain domain = trial % 2 == 0 ? disc64()
                                         : Domain{leastres::testing::random_convex_polygon(rng), ExplicitShape{}};
    const ConcaveRoof roof = random_roof(rng, domain);
    REQUIRE(is_feasible(roof, domain));
    const auto dec = cell_decomposition(roof, domain);
    CHECK(std::abs(dec.total_area() - domain.area()) <= 1e-8 * domain.area());
    for (const auto &cell : dec.cells) {
      const AffinePlane plane = roof.plane(cell.plane_index);
      for (int i = 0; i < 100; ++i) {
        const Point2 x = random_point_in(rng, cell.region);
        CHECK(plane(x) <= brute_min(roof, x) + 1e-9);
      }
    }
  }
}

TEST_CASE("random roofs: Monte Carlo agrees with the exact integral") {
  std::mt19937_64 rng(77);
  int outside = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Domain domain = trial % 2 == 0 ? disc64()
                                         : Domain{leastres::testing::random_convex_polygon(rng), ExplicitShape{}};
    const ConcaveRoof roof = random_roof(rng, domain);
    const auto model = trial % 3 == 0 ? PressureModel::tangential() : PressureModel::newton();
    const double exact = resistance_exact(roof, domain, model);
    const auto mc = resistance_montecarlo(roof, domain, model, 1'000'000, 1000 + trial);
    if (std::abs(exact - mc.estimate) > 3 * mc.standard_error) ++outside;
  }
  CHECK(outside == 0);
}

TEST_CASE("random roofs: envelope properties") {
  std::mt19937_64 rng(31);
  const auto newton = PressureModel::newton();
  for (int trial = 0; trial < 50; ++trial) {
    const Domain domain = trial % 2 == 0 ? disc64()
                                         : Domain{leastres::testing::random_convex_polygon(rng), ExplicitShape{}};
    const ConcaveRoof roof = random_roof(rng, domain);
    const double cap = roof.height_cap();

    for (int i = 0; i < 200; ++i) {
      const Point2 x = random_point_in(rng, domain.shape);
      const Point2 y = random_point_in(rng, domain.shape);
      const double ux = eval_height(roof, x, domain);
      const double uy = eval_height(roof, y, domain);
      CHECK(ux >= -1e-9);
      CHECK(ux <= cap);
      CHECK(eval_height(roof, 0.5 * (x + y), domain) >= 0.5 * (ux + uy) - 1e-12);

      // Tangent-plane identity |grad u| * dist(x, zero line) = u(x).
      const auto active = gradient_ae(roof, x, domain);
      if (active && norm(active->gradient) > 0.0 && ux > 0.0) {
        const double d = zero_line_distance(roof.plane(active->index), x);
        CHECK(norm(active->gradient) * d == doctest::Approx(ux).epsilon(1e-10));
      }
    }

    // Reversing and shuffling the plane list leaves F unchanged.
    std::vector<AffinePlane> planes(roof.planes().begin(), roof.planes().end());
    const double base = resistance_exact(roof, domain, newton);
    std::reverse(planes.begin(), planes.end());
    CHECK(std::abs(resistance_exact(ConcaveRoof(planes, cap), domain, newton) - base) <= 1e-12 * base);
    std::shuffle(planes.begin(), planes.end(), rng);
    CHECK(std::abs(resistance_exact(ConcaveRoof(planes, cap), domain, newton) - base) <= 1e-12 * base);

    // Projection is idempotent.
    const ConcaveRoof again = project_feasible(roof, domain);
    CHECK(std::equal(again.planes().begin(), again.planes().end(), roof.planes().begin(),
                     roof.planes().end()));
  }
}
