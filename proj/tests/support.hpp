#pragma once

// Shared generators for the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "leastres/geometry.hpp"
#include "leastres/roof.hpp"

namespace leastres::testing {

inline Domain unit_square() { return make_polygon_domain({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

inline Domain disc64() { return make_disc_domain({0, 0}, 1.0, 64); }

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Convex polygon with vertices on a random ellipse at sorted random angles.
inline ConvexPolygon random_convex_polygon(std::mt19937_64 &rng, int max_vertices = 12) {
  const int n = std::uniform_int_distribution<int>(3, max_vertices)(rng);
  const double ax = uniform(rng, 0.5, 2.0);
  const double ay = uniform(rng, 0.5, 2.0);
  const double tilt = uniform(rng, 0.0, std::numbers::pi);
  const Vec2 center{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
  for (;;) {
    std::vector<double> angles(n);
    for (auto &a : angles) a = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    std::sort(angles.begin(), angles.end());
    bool spaced = true;
    for (int i = 0; i < n; ++i) {
      const double gap = i + 1 < n ? angles[i + 1] - angles[i] : angles[0] + 2 * std::numbers::pi - angles[i];
      if (gap < 0.05) spaced = false;
    }
    if (!spaced) continue;
    std::vector<Point2> vs;
    for (double a : angles) {
      const double x = ax * std::cos(a);
      const double y = ay * std::sin(a);
      vs.push_back({center.x + x * std::cos(tilt) - y * std::sin(tilt),
                    center.y + x * std::sin(tilt) + y * std::cos(tilt)});
    }
    return ConvexPolygon::from_vertices(std::move(vs));
  }
}

/// Random roof with up to `max_planes` planes, projected feasible.
inline ConcaveRoof random_roof(std::mt19937_64 &rng, const Domain &domain, int max_planes = 20,
                               double max_slope = 3.0) {
  const int count = std::uniform_int_distribution<int>(1, max_planes)(rng);
  const double cap = uniform(rng, 0.5, 2.0);
  std::vector<AffinePlane> planes;
  const Point2 center = domain.shape.centroid();
  for (int i = 0; i < count; ++i) {
    const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double slope = uniform(rng, 0.0, max_slope);
    const Vec2 g{slope * std::cos(angle), slope * std::sin(angle)};
    const double height = uniform(rng, 0.0, 1.5 * cap);
    planes.push_back({g, height - dot(g, center)});
  }
  return project_feasible(ConcaveRoof(std::move(planes), cap), domain);
}

/// Uniform point in a convex polygon: pick a fan triangle by area, then a
/// uniform point in it.
inline Point2 random_point_in(std::mt19937_64 &rng, const ConvexPolygon &poly) {
  const Point2 &o = poly.vertex(0);
  std::vector<double> weights;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    weights.push_back(std::abs(cross(poly.vertex(i) - o, poly.vertex(i + 1) - o)));
  }
  const std::size_t t = std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(rng) + 1;
  double r1 = uniform(rng, 0.0, 1.0);
  double r2 = uniform(rng, 0.0, 1.0);
  if (r1 + r2 > 1.0) {
    r1 = 1.0 - r1;
    r2 = 1.0 - r2;
  }
  return o + r1 * (poly.vertex(t) - o) + r2 * (poly.vertex(t + 1) - o);
}

}  // namespace leastres::testing
