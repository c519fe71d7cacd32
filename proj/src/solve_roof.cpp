#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "leastres/error.hpp"
#include "leastres/random.hpp"
#include "leastres/solver.hpp"
#include "leastres/tolerance.hpp"
#include "leastres/truncation.hpp"

namespace leastres {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Sampling lanes of the per-iteration random stream.
enum Lane : std::uint64_t { kMoveLane, kAcceptLane, kPickLane, kNormalLane };

struct Line {
  double slope;  // descent per unit radius, >= 0
  double at_zero;
};

Point2 domain_center(const Domain &domain) {
  if (const auto *disc = std::get_if<DiscShape>(&domain.provenance)) return disc->center;
  return domain.shape.centroid();
}

double circumradius(const Domain &domain, Point2 center) {
  double r = 0.0;
  for (const auto &v : domain.shape.vertices()) r = std::max(r, norm(v - center));
  return r;
}

// Radial resistance of min(M, lines) on [0, R], integrated piece by piece.
double envelope_resistance(std::span<const Line> lines, double height_cap, double radius,
                           const PressureModel &model) {
  std::vector<Line> all(lines.begin(), lines.end());
  all.push_back({0.0, height_cap});
  double total = 0.0;
  double r = 0.0;
  while (r < radius) {
    // Active line at r+ (lowest value, then steepest).
    std::size_t active = 0;
    for (std::size_t i = 1; i < all.size(); ++i) {
      const double vi = all[i].at_zero - all[i].slope * r, va = all[active].at_zero - all[active].slope * r;
      if (vi < va - 1e-15 || (vi <= va + 1e-15 && all[i].slope > all[active].slope)) active = i;
    }
    // It stays active until a steeper line crosses below it.
    double next = radius;
    for (const auto &l : all) {
      if (l.slope <= all[active].slope) continue;
      const double cross = (l.at_zero - all[active].at_zero) / (l.slope - all[active].slope);
      if (cross > r) next = std::min(next, cross);
    }
    total += model.of_modulus(all[active].slope) * (next * next - r * r);
    r = next;
  }
  return std::numbers::pi * total;
}

// Greedy choice of `count` segment lines of the profile.
std::vector<Line> select_lines(const RadialProfile &profile, double height_cap, int count,
                               const PressureModel &model) {
  std::vector<Line> candidates;
  const auto &phi = profile.heights;
  for (std::size_t j = 0; j + 1 < phi.size(); ++j) {
    const double slope = (phi[j] - phi[j + 1]) / profile.step();
    if (slope <= 0.0) continue;
    const Line l{slope, phi[j] + slope * profile.node(j)};
    if (!candidates.empty() && std::abs(candidates.back().slope - slope) <= 1e-12 * (1.0 + slope)) continue;
    candidates.push_back(l);
  }
  std::vector<Line> chosen;
  double current = envelope_resistance(chosen, height_cap, profile.radius, model);
  while (static_cast<int>(chosen.size()) < count) {
    std::size_t best = candidates.size();
    double best_value = current;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      chosen.push_back(candidates[i]);
      const double v = envelope_resistance(chosen, height_cap, profile.radius, model);
      chosen.pop_back();
      if (v < best_value) {
        best_value = v;
        best = i;
      }
    }
    if (best == candidates.size()) break;
    chosen.push_back(candidates[best]);
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best));
    current = best_value;
  }
  return chosen;
}

double standard_normal(std::uint64_t seed, std::uint64_t iteration, std::uint64_t lane) {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - counter_uniform(seed, iteration, kNormalLane, 2 * lane);
  const double u2 = counter_uniform(seed, iteration, kNormalLane, 2 * lane + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// Uniform point of the polygon: area-weighted fan triangle, then barycentric.
Point2 point_in(const ConvexPolygon &poly, double u_tri, double u1, double u2) {
  const Point2 &o = poly.vertex(0);
  double target = u_tri * poly.area();
  std::size_t t = 1;
  for (; t + 2 < poly.size(); ++t) {
    const double a = 0.5 * cross(poly.vertex(t) - o, poly.vertex(t + 1) - o);
    if (target < a) break;
    target -= a;
  }
  if (u1 + u2 > 1.0) {
    u1 = 1.0 - u1;
    u2 = 1.0 - u2;
  }
  return o + u1 * (poly.vertex(t) - o) + u2 * (poly.vertex(t + 1) - o);
}

}  // namespace

ConcaveRoof radial_roof(const Domain &domain, const RadialProfile &profile, double height_cap, int directions,
                        int segments, const PressureModel &model) {
  if (directions < 3) throw ValidationError("need at least 3 directions");
  if (segments < 1) throw ValidationError("need at least 1 profile segment");
  const Point2 center = domain_center(domain);
  const auto lines = select_lines(profile, height_cap, segments, model);
  std::vector<AffinePlane> planes;
  for (int j = 0; j < directions; ++j) {
    // Offset by half a step so a regular polygon's edge normals are hit.
    const double angle = kTwoPi * (j + 0.5) / directions;
    const Vec2 e{std::cos(angle), std::sin(angle)};
    double support = 0.0;
    for (const auto &v : domain.shape.vertices()) support = std::max(support, dot(v - center, e));
    // Radius coordinate rho = (x - center, e) R / support, so the profile's
    // rim lands on the supporting line.
    const double stretch = profile.radius / support;
    for (const auto &l : lines) {
      const Vec2 g = (-l.slope * stretch) * e;
      planes.push_back({g, l.at_zero - dot(g, center)});
    }
  }
  return project_feasible(ConcaveRoof(std::move(planes), height_cap), domain);
}

SolveReport solve_roof(const Domain &domain, const PressureModel &model, double height_cap,
                       const SolveOptions &options) {
  if (!model.radial()) throw ValidationError("solve_roof initialises from the radial problem; needs a radial law");
  if (options.plane_budget < 3) throw ValidationError("plane budget must be at least 3");
  if (options.iterations < 0) throw ValidationError("iteration budget must be nonnegative");
  if (!(height_cap >= 0.0) || !std::isfinite(height_cap)) throw ValidationError("height cap must be >= 0");
  if (options.profile_segments < 1 || options.radial_grid < 16 || options.radial_sweeps < 1 ||
      options.flatten_max_exponent < 0 || options.max_planes < 0 || !(options.cooling > 0.0) ||
      !(options.cooling <= 1.0) || !(options.initial_temperature >= 0.0) || !(options.step_scale >= 0.0)) {
    throw ValidationError("invalid solver options");
  }

  SolveReport report;
  report.seed = options.seed;
  const std::uint64_t seed = options.seed;

  const Point2 center = domain_center(domain);
  const double radius = circumradius(domain, center);
  if (height_cap == 0.0) {
    report.roof = ConcaveRoof({}, 0.0);
    report.resistance = resistance_exact(report.roof, domain, model);
    report.initial_resistance = report.resistance;
    report.radial_resistance = std::numbers::pi * radius * radius * model.of_modulus(0.0);
    report.boundary_flatness = boundary_max(report.roof, domain);
    report.trace.push_back(report.resistance);
    return report;
  }

  const RadialResult radial = radial_solve(radius, height_cap, model, options.radial_grid, options.radial_sweeps, seed);
  report.radial_resistance = radial.resistance;

  ConcaveRoof current =
      radial_roof(domain, radial.profile, height_cap, options.plane_budget, options.profile_segments, model);
  double current_f = resistance_exact(current, domain, model);
  report.initial_resistance = current_f;
  ConcaveRoof best = current;
  double best_f = current_f;
  report.trace.push_back(best_f);

  const std::size_t plane_limit = options.max_planes > 0
                                      ? static_cast<std::size_t>(options.max_planes)
                                      : current.planes().size() + static_cast<std::size_t>(options.plane_budget);
  const double t0 = options.initial_temperature * current_f;
  double temperature = t0;
  const double slope_unit = height_cap / domain.diameter();
  const auto schedule = geometric_schedule(options.flatten_max_exponent);

  for (int it = 0; it < options.iterations; ++it) {
    const auto iter = static_cast<std::uint64_t>(it);
    const double pick = counter_uniform(seed, iter, kPickLane, 0);
    const double draw = counter_uniform(seed, iter, kMoveLane, 0);
    const MoveKind kind = draw < 0.5    ? MoveKind::perturb
                          : draw < 0.7  ? MoveKind::add_plane
                          : draw < 0.85 ? MoveKind::delete_plane
                                        : MoveKind::flatten;
    ++report.moves.proposed[static_cast<int>(kind)];

    std::vector<AffinePlane> planes(current.planes().begin(), current.planes().end());
    std::optional<ConcaveRoof> candidate;
    const double step = options.step_scale * (t0 > 0.0 ? temperature / t0 : 1.0);
    switch (kind) {
      case MoveKind::perturb: {
        if (planes.empty()) break;
        auto &p = planes[static_cast<std::size_t>(pick * static_cast<double>(planes.size()))];
        p.g.x += step * slope_unit * standard_normal(seed, iter, 0);
        p.g.y += step * slope_unit * standard_normal(seed, iter, 1);
        p.c += step * height_cap * standard_normal(seed, iter, 2);
        candidate = project_feasible(ConcaveRoof(std::move(planes), height_cap), domain);
        break;
      }
      case MoveKind::add_plane: {
        if (planes.size() >= plane_limit) break;
        // Through a random point of the graph, tilted a little away from the
        // local tangent plane.
        const Point2 x = point_in(domain.shape, pick, counter_uniform(seed, iter, kPickLane, 1),
                                  counter_uniform(seed, iter, kPickLane, 2));
        const auto active = gradient_ae(current, x, domain);
        Vec2 g = active ? active->gradient : Vec2{0.0, 0.0};
        g.x += std::max(step, 0.01) * slope_unit * standard_normal(seed, iter, 0);
        g.y += std::max(step, 0.01) * slope_unit * standard_normal(seed, iter, 1);
        planes.push_back({g, current.value(x) - dot(g, x)});
        candidate = project_feasible(ConcaveRoof(std::move(planes), height_cap), domain);
        break;
      }
      case MoveKind::delete_plane: {
        std::vector<bool> has_area(planes.size() + 1, false);
        for (const auto &cell : cell_decomposition(current, domain).cells) has_area[cell.plane_index] = true;
        std::vector<std::size_t> idle;
        for (std::size_t i = 0; i < planes.size(); ++i) {
          if (!has_area[i]) idle.push_back(i);
        }
        if (idle.empty()) break;
        planes.erase(planes.begin() + static_cast<std::ptrdiff_t>(idle[static_cast<std::size_t>(
                                          pick * static_cast<double>(idle.size()))]));
        candidate = project_feasible(ConcaveRoof(std::move(planes), height_cap), domain);
        break;
      }
      case MoveKind::flatten: {
        if (planes.size() >= plane_limit) break;
        const auto edge = static_cast<std::size_t>(pick * static_cast<double>(domain.shape.size()));
        const SupportProbe probe = edge_probe(domain, edge);
        // Nothing to cut where the boundary is already (numerically) flat.
        if (current.value(probe.x0) <= tol::kFeasible * height_cap) break;
        if (auto hit = flatten_search(current, probe, domain, model, schedule)) {
          candidate = project_feasible(hit->truncated, domain);
        }
        break;
      }
    }
    if (candidate) {
      const double f = resistance_exact(*candidate, domain, model);
      const double delta = f - current_f;
      bool accept = delta < 0.0;
      if (!accept && kind != MoveKind::flatten && temperature > 0.0) {
        accept = counter_uniform(seed, iter, kAcceptLane, 0) < std::exp(-delta / temperature);
      }
      if (accept) {
        current = std::move(*candidate);
        current_f = f;
        temperature *= options.cooling;
        ++report.moves.accepted[static_cast<int>(kind)];
        if (current_f < best_f) {
          best = current;
          best_f = current_f;
        }
      }
    }
    report.trace.push_back(best_f);
  }

  report.iterations = options.iterations;
  report.roof = best;
  report.resistance = best_f;
  report.boundary_flatness = boundary_max(best, domain);
  return report;
}

}  // namespace leastres
