#include "leastres/roof.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <limits>

#include "leastres/error.hpp"
#include "leastres/random.hpp"
#include "leastres/tolerance.hpp"

namespace leastres {

ConcaveRoof::ConcaveRoof(std::vector<AffinePlane> planes, double height_cap)
    : planes_(std::move(planes)), cap_(height_cap) {
  if (!(cap_ >= 0.0) || !std::isfinite(cap_)) {
    throw ValidationError("roof height cap must be finite and nonnegative");
  }
  for (const auto &p : planes_) {
    if (!is_finite(p.g) || !std::isfinite(p.c)) throw ValidationError("roof plane is not finite");
  }
}

AffinePlane ConcaveRoof::plane(std::size_t i) const {
  if (i == planes_.size()) return AffinePlane{{0.0, 0.0}, cap_};
  return planes_.at(i);
}

double ConcaveRoof::value(Point2 x) const {
  double v = cap_;
  for (const auto &p : planes_) v = std::min(v, p(x));
  return v;
}

ConcaveRoof ConcaveRoof::with_plane(AffinePlane p) const {
  std::vector<AffinePlane> planes = planes_;
  planes.push_back(p);
  return ConcaveRoof(std::move(planes), cap_);
}

bool is_feasible(const ConcaveRoof &roof, const Domain &domain) {
  for (const auto &p : roof.planes()) {
    for (const auto &v : domain.shape.vertices()) {
      if (p(v) < -tol::kFeasible) return false;
    }
  }
  return true;
}

double eval_height(const ConcaveRoof &roof, Point2 x, const Domain &domain) {
  if (!domain.contains(x)) throw ValidationError("point lies outside the domain");
  return roof.value(x);
}

namespace {

std::optional<ActivePlane> active_plane(const ConcaveRoof &roof, Point2 x) {
  const std::size_t count = roof.cap_index() + 1;
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const double v = roof.plane(i)(x);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const Vec2 g = roof.plane(best).g;
  const double tie = tol::kTie * (1.0 + roof.height_cap());
  for (std::size_t i = 0; i < count; ++i) {
    if (i == best) continue;
    const AffinePlane p = roof.plane(i);
    if (p(x) - best_value <= tie && !(p.g == g)) return std::nullopt;
  }
  return ActivePlane{g, best};
}

}  // namespace

std::optional<ActivePlane> gradient_ae(const ConcaveRoof &roof, Point2 x, const Domain &domain) {
  if (!domain.contains(x)) throw ValidationError("point lies outside the domain");
  return active_plane(roof, x);
}

double CellDecomposition::total_area() const {
  double total = 0.0;
  for (const auto &cell : cells) total += cell.region.area();
  return total;
}

CellDecomposition cell_decomposition(const ConcaveRoof &roof, const ConvexPolygon &region) {
  CellDecomposition out;
  const std::size_t count = roof.cap_index() + 1;
  const double tie = tol::kTie * (1.0 + roof.height_cap());
  std::vector<AffinePlane> all(count);
  for (std::size_t i = 0; i < count; ++i) all[i] = roof.plane(i);
  std::vector<std::size_t> order(count);
  std::vector<double> gap(count);
  for (std::size_t i = 0; i < count; ++i) {
    const AffinePlane &pi = all[i];
    // Cells border planes with nearby gradients, so clipping by those first
    // shrinks the cell early and most later clips are no-ops.
    for (std::size_t j = 0; j < count; ++j) {
      const Vec2 d = all[j].g - pi.g;
      gap[j] = d.x * d.x + d.y * d.y;
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return gap[a] < gap[b] || (gap[a] == gap[b] && a < b);
    });
    std::optional<ConvexPolygon> cell = region;
    for (std::size_t j : order) {
      if (!cell) break;
      if (j == i) continue;
      const AffinePlane &pj = all[j];
      // Keep {l_j - l_i >= 0}.
      const Vec2 g = pj.g - pi.g;
      const double c = pj.c - pi.c;
      if (g.x == 0.0 && g.y == 0.0) {
        const bool loses = j < i ? c <= tie : c < -tie;
        if (loses) cell.reset();
        continue;
      }
      // Cheap form of halfplane_clip's own all-inside test.
      const double eps = tol::kGeometry * norm(g) * cell->scale();
      bool inside = true;
      for (const auto &v : cell->vertices()) {
        if (dot(g, v) + c < -eps) {
          inside = false;
          break;
        }
      }
      if (!inside) cell = halfplane_clip(*cell, g, c);
    }
    if (cell) out.cells.push_back(Cell{i, std::move(*cell)});
  }
  return out;
}

CellDecomposition cell_decomposition(const ConcaveRoof &roof, const Domain &domain) {
  return cell_decomposition(roof, domain.shape);
}

double resistance_exact(const ConcaveRoof &roof, const Domain &domain, const PressureModel &model) {
  const auto decomposition = cell_decomposition(roof, domain);
  double total = 0.0;
  for (const auto &cell : decomposition.cells) {
    total += cell.region.area() * model(roof.plane(cell.plane_index).g);
  }
  return total;
}

MonteCarloEstimate resistance_montecarlo(const ConcaveRoof &roof, const Domain &domain,
                                         const PressureModel &model, std::size_t sample_count,
                                         std::uint64_t seed) {
  if (sample_count < 1000) throw ValidationError("Monte Carlo needs at least 1000 samples");
  const auto vs = domain.shape.vertices();
  double xmin = vs[0].x, xmax = vs[0].x, ymin = vs[0].y, ymax = vs[0].y;
  for (const auto &v : vs) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }

  // Hot loop: edge half-planes and the plane list are flattened once.
  struct Row {
    double gx, gy, c;
  };
  std::vector<Row> edges;
  for (std::size_t j = 0; j < domain.shape.size(); ++j) {
    const Point2 &a = domain.shape.vertex(j);
    const Vec2 e = domain.shape.vertex(j + 1) - a;
    edges.push_back({-e.y, e.x, e.y * a.x - e.x * a.y});  // cross(e, x - a) >= 0
  }
  std::vector<Row> planes;
  for (std::size_t j = 0; j <= roof.cap_index(); ++j) {
    const AffinePlane p = roof.plane(j);
    planes.push_back({p.g.x, p.g.y, p.c});
  }
  const double tie = tol::kTie * (1.0 + roof.height_cap());

  constexpr std::uint64_t kMaxAttempts = 1u << 20;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    double value = 0.0;
    bool accepted = false;
    for (std::uint64_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
      const double x = xmin + (xmax - xmin) * counter_uniform(seed, i, attempt, 0);
      const double y = ymin + (ymax - ymin) * counter_uniform(seed, i, attempt, 1);
      bool inside = true;
      for (const Row &r : edges) {
        if (r.gx * x + r.gy * y + r.c < 0.0) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      std::size_t best = 0;
      double best_value = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < planes.size(); ++j) {
        const double v = planes[j].gx * x + planes[j].gy * y + planes[j].c;
        if (v < best_value) {
          best_value = v;
          best = j;
        }
      }
      bool tied = false;
      for (std::size_t j = 0; j < planes.size() && !tied; ++j) {
        if (j == best) continue;
        const Row &r = planes[j];
        tied = r.gx * x + r.gy * y + r.c - best_value <= tie &&
               !(r.gx == planes[best].gx && r.gy == planes[best].gy);
      }
      if (tied) continue;
      value = model(Vec2{planes[best].gx, planes[best].gy});
      accepted = true;
      break;
    }
    if (!accepted) throw ValidationError("Monte Carlo sampler could not place a sample");
    const double delta = value - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (value - mean);
  }
  const double n = static_cast<double>(sample_count);
  const double variance = m2 / (n - 1.0);
  const double area = domain.area();
  return {area * mean, area * std::sqrt(variance / n)};
}

SegmentMax max_on_segment(const ConcaveRoof &roof, Point2 a, Point2 b) {
  const std::size_t count = roof.cap_index() + 1;
  std::vector<double> at_a(count);
  std::vector<double> slope(count);
  for (std::size_t i = 0; i < count; ++i) {
    const AffinePlane p = roof.plane(i);
    at_a[i] = p(a);
    slope[i] = p(b) - at_a[i];
  }
  auto line = [&](std::size_t i, double s) { return at_a[i] + s * slope[i]; };

  // Active line at s = 0: lowest value, then lowest slope (right derivative).
  std::size_t active = 0;
  for (std::size_t i = 1; i < count; ++i) {
    if (at_a[i] < at_a[active] || (at_a[i] == at_a[active] && slope[i] < slope[active])) active = i;
  }
  double s = 0.0;
  while (slope[active] > 0.0) {
    double next = std::numeric_limits<double>::infinity();
    std::size_t next_line = active;
    const double here = line(active, s);
    for (std::size_t j = 0; j < count; ++j) {
      if (!(slope[j] < slope[active])) continue;
      const double gap = std::max(0.0, line(j, s) - here);
      const double sj = s + gap / (slope[active] - slope[j]);
      if (sj < next || (sj == next && slope[j] < slope[next_line])) {
        next = sj;
        next_line = j;
      }
    }
    if (next >= 1.0) {
      s = 1.0;
      break;
    }
    s = next;
    active = next_line;
  }
  const Point2 x = a + s * (b - a);
  return {roof.value(x), x};
}

SegmentMax boundary_max(const ConcaveRoof &roof, const Domain &domain) {
  const auto &poly = domain.shape;
  SegmentMax best{-std::numeric_limits<double>::infinity(), poly.vertex(0)};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const SegmentMax m = max_on_segment(roof, poly.vertex(i), poly.vertex(i + 1));
    if (m.value > best.value) best = m;
  }
  return best;
}

ConcaveRoof project_feasible(const ConcaveRoof &roof, const Domain &domain) {
  const double cap = roof.height_cap();
  std::vector<AffinePlane> kept;
  kept.reserve(roof.planes().size());
  for (AffinePlane p : roof.planes()) {
    auto lowest_value = [&] {
      double lowest = std::numeric_limits<double>::infinity();
      for (const auto &v : domain.shape.vertices()) lowest = std::min(lowest, p(v));
      return lowest;
    };
    double lowest = lowest_value();
    // Rounding can leave the raised plane a few ulps below zero; step c up
    // until it is exactly nonnegative so a second projection is a no-op.
    while (lowest < 0.0) {
      p.c = std::max(p.c - lowest, std::nextafter(p.c, std::numeric_limits<double>::infinity()));
      lowest = lowest_value();
    }
    if (lowest >= cap) continue;
    kept.push_back(p);
  }
  return ConcaveRoof(std::move(kept), cap);
}

double zero_line_distance(const AffinePlane &plane, Point2 x) {
  const double g2 = dot(plane.g, plane.g);
  if (g2 == 0.0) throw ValidationError("horizontal plane has no zero line");
  const Point2 foot = (-plane.c / g2) * plane.g;
  const Vec2 along = perp(plane.g);
  return std::abs(cross(along, x - foot)) / norm(along);
}

}  // namespace leastres
