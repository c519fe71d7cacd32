#include "leastres/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "leastres/error.hpp"
#include "leastres/tolerance.hpp"

namespace leastres {

namespace {

double bbox_diagonal(std::span<const Point2> vs) {
  double xmin = vs[0].x, xmax = vs[0].x, ymin = vs[0].y, ymax = vs[0].y;
  for (const auto &v : vs) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  return std::hypot(xmax - xmin, ymax - ymin);
}

double segment_distance(Point2 p, Point2 a, Point2 b) {
  const Vec2 e = b - a;
  const double len2 = dot(e, e);
  double s = len2 > 0.0 ? dot(p - a, e) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return distance(p, a + s * e);
}

// Unit vector of `v`, leaving it untouched when it is already unit within
// tolerance so that stored probes round-trip bit-exactly.
Vec2 unit_direction(Vec2 v) {
  if (!is_finite(v)) throw ValidationError("direction is not finite");
  const double len = norm(v);
  if (len == 0.0) throw ValidationError("direction is zero");
  if (std::abs(len - 1.0) <= tol::kUnit) return v;
  return (1.0 / len) * v;
}

}  // namespace

double signed_area(std::span<const Point2> vertices) {
  const std::size_t n = vertices.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice += cross(vertices[i], vertices[(i + 1) % n]);
  return 0.5 * twice;
}

ConvexPolygon::ConvexPolygon(std::vector<Point2> vertices, Trusted)
    : vertices_(std::move(vertices)),
      area_(signed_area(vertices_)),
      scale_(bbox_diagonal(vertices_)) {}

ConvexPolygon ConvexPolygon::from_vertices(std::vector<Point2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw ValidationError("polygon needs at least 3 vertices");
  for (const auto &v : vertices) {
    if (!is_finite(v)) throw ValidationError("polygon vertex is not finite");
  }
  const double scale = bbox_diagonal(vertices);
  if (!(scale > 0.0)) throw ValidationError("polygon is degenerate");
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(vertices[i], vertices[(i + 1) % n]) <= tol::kGeometry * scale) {
      std::ostringstream msg;
      msg << "polygon vertices " << i << " and " << (i + 1) % n << " coincide";
      throw ValidationError(msg.str());
    }
  }
  if (!(signed_area(vertices) > 0.0)) {
    throw ValidationError("polygon must have positive signed area (counterclockwise order)");
  }
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e1 = vertices[(i + 1) % n] - vertices[i];
    const Vec2 e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    const double c = cross(e1, e2);
    if (c < -tol::kGeometry * norm(e1) * norm(e2)) {
      std::ostringstream msg;
      msg << "polygon is not convex at vertex " << (i + 1) % n;
      throw ValidationError(msg.str());
    }
    turning += std::atan2(c, dot(e1, e2));
  }
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) {
    throw ValidationError("polygon boundary winds more than once");
  }
  return ConvexPolygon(std::move(vertices), Trusted{});
}

double ConvexPolygon::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
      best = std::max(best, distance(vertices_[i], vertices_[j]));
    }
  }
  return best;
}

Point2 ConvexPolygon::centroid() const {
  Vec2 acc;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 &p = vertices_[i];
    const Point2 &q = vertices_[(i + 1) % n];
    acc += cross(p, q) * (p + q);
  }
  return (1.0 / (6.0 * area_)) * acc;
}

bool ConvexPolygon::contains(Point2 p, double slack) const {
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 &a = vertices_[i];
    const Vec2 e = vertices_[(i + 1) % n] - a;
    if (cross(e, p - a) < -slack * norm(e)) return false;
  }
  return true;
}

double ConvexPolygon::boundary_distance(Point2 p) const {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, segment_distance(p, vertices_[i], vertices_[(i + 1) % n]));
  }
  return best;
}

ConvexPolygon ConvexPolygon::map_affine(double a00, double a01, double a10, double a11,
                                        Vec2 offset) const {
  if (!(a00 * a11 - a01 * a10 > 0.0)) {
    throw ValidationError("affine map must preserve orientation");
  }
  std::vector<Point2> out;
  out.reserve(vertices_.size());
  for (const auto &v : vertices_) {
    out.push_back({a00 * v.x + a01 * v.y + offset.x, a10 * v.x + a11 * v.y + offset.y});
  }
  return ConvexPolygon(std::move(out), Trusted{});
}

std::optional<ConvexPolygon> halfplane_clip(const ConvexPolygon &poly, Vec2 g, double c) {
  if (!is_finite(g) || !std::isfinite(c)) throw ValidationError("half-plane is not finite");
  const double gnorm = norm(g);
  if (gnorm == 0.0) throw ValidationError("half-plane normal is zero");

  const auto vs = poly.vertices();
  const std::size_t n = vs.size();
  const double eps = tol::kGeometry * gnorm * poly.scale();

  std::vector<double> side(n);
  bool all_in = true;
  bool all_out = true;
  for (std::size_t i = 0; i < n; ++i) {
    side[i] = dot(g, vs[i]) + c;
    if (side[i] < -eps) all_in = false;
    if (side[i] > eps) all_out = false;
  }
  if (all_in) return poly;
  if (all_out) return std::nullopt;

  std::vector<Point2> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const bool in_i = side[i] >= -eps;
    const bool in_j = side[j] >= -eps;
    if (in_i) out.push_back(vs[i]);
    if (in_i != in_j) {
      const double s = side[i] / (side[i] - side[j]);
      out.push_back(vs[i] + s * (vs[j] - vs[i]));
    }
  }

  // A clip line through (or next to) an existing vertex produces a second
  // copy a few ulps away; the sliver edge between them has no meaningful
  // direction, so anything closer than the membership tolerance is merged.
  const double merge = tol::kMembership * poly.scale();
  std::vector<Point2> cleaned;
  cleaned.reserve(out.size());
  for (const auto &p : out) {
    if (cleaned.empty() || distance(cleaned.back(), p) > merge) cleaned.push_back(p);
  }
  while (cleaned.size() > 1 && distance(cleaned.front(), cleaned.back()) <= merge) {
    cleaned.pop_back();
  }
  if (cleaned.size() < 3) return std::nullopt;
  if (signed_area(cleaned) < tol::kEmptyArea * poly.area()) return std::nullopt;
  return ConvexPolygon(std::move(cleaned), ConvexPolygon::Trusted{});
}

std::optional<ConvexPolygon> intersect(const ConvexPolygon &a, const ConvexPolygon &b) {
  std::optional<ConvexPolygon> result = a;
  const std::size_t n = b.size();
  for (std::size_t i = 0; i < n && result; ++i) {
    const Point2 &p = b.vertex(i);
    const Vec2 g = perp(b.vertex(i + 1) - p);
    result = halfplane_clip(*result, g, -dot(g, p));
  }
  return result;
}

bool Domain::contains(Point2 p) const {
  return shape.contains(p, tol::kMembership * shape.scale());
}

Domain make_polygon_domain(std::vector<Point2> vertices) {
  return Domain{ConvexPolygon::from_vertices(std::move(vertices)), ExplicitShape{}};
}

Domain make_disc_domain(Point2 center, double radius, int segments) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError("disc radius must be positive");
  }
  if (segments < 8) throw ValidationError("disc needs at least 8 segments");
  std::vector<Point2> vs;
  vs.reserve(static_cast<std::size_t>(segments));
  for (int j = 0; j < segments; ++j) {
    const double angle = 2.0 * std::numbers::pi * j / segments;
    vs.push_back({center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)});
  }
  return Domain{ConvexPolygon::from_vertices(std::move(vs)), DiscShape{center, radius, segments}};
}

SupportProbe support_probe(const Domain &domain, Vec2 direction) {
  const Vec2 n = unit_direction(direction);
  const auto vs = domain.shape.vertices();
  const std::size_t count = vs.size();

  std::size_t top = 0;
  for (std::size_t i = 1; i < count; ++i) {
    if (dot(vs[i], n) > dot(vs[top], n)) top = i;
  }
  const double h = dot(vs[top], n);
  const double eps = tol::kGeometry * domain.shape.scale();

  std::size_t first = top;
  std::size_t last = top;
  for (std::size_t step = 1; step < count; ++step) {
    const std::size_t i = (top + count - step) % count;
    if (dot(vs[i], n) < h - eps) break;
    first = i;
  }
  for (std::size_t step = 1; step < count; ++step) {
    const std::size_t i = (top + step) % count;
    if (dot(vs[i], n) < h - eps || i == first) break;
    last = i;
  }

  SupportProbe probe;
  probe.n = n;
  const Vec2 tau = perp(n);
  Point2 lo = vs[first];
  Point2 hi = vs[last];
  if (dot(lo, tau) > dot(hi, tau)) std::swap(lo, hi);
  probe.contact_lower = lo;
  probe.contact_upper = hi;
  probe.x0 = first == last ? lo : 0.5 * (lo + hi);
  return probe;
}

SupportProbe make_probe(const Domain &domain, Point2 x0, Vec2 n) {
  if (!is_finite(x0)) throw ValidationError("probe x0 is not finite");
  SupportProbe probe = support_probe(domain, n);
  const double slack = tol::kMembership * domain.shape.scale();
  const Vec2 seg = probe.contact_upper - probe.contact_lower;
  const double len2 = dot(seg, seg);
  double s = len2 > 0.0 ? dot(x0 - probe.contact_lower, seg) / len2 : 0.0;
  const Point2 nearest = probe.contact_lower + std::clamp(s, 0.0, 1.0) * seg;
  if (distance(nearest, x0) > slack) {
    throw ValidationError("probe x0 does not lie on the contact segment of its support line");
  }
  probe.x0 = x0;
  return probe;
}

SupportProbe edge_probe(const Domain &domain, std::size_t edge) {
  const auto &poly = domain.shape;
  const Point2 &a = poly.vertex(edge);
  const Point2 &b = poly.vertex(edge + 1);
  const Vec2 e = b - a;
  const Vec2 outward = (1.0 / norm(e)) * Vec2{e.y, -e.x};
  return make_probe(domain, 0.5 * (a + b), outward);
}

double width_along(const Domain &domain, Vec2 n) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto &v : domain.shape.vertices()) {
    lo = std::min(lo, dot(v, n));
    hi = std::max(hi, dot(v, n));
  }
  return hi - lo;
}

ChordLengths chord_lengths(const Domain &domain, const SupportProbe &probe, double t) {
  const auto &poly = domain.shape;
  const double scale = poly.scale();
  double h = -std::numeric_limits<double>::infinity();
  for (const auto &v : poly.vertices()) h = std::max(h, dot(v, probe.n));
  if (std::abs(dot(probe.x0, probe.n) - h) > tol::kMembership * scale) {
    throw ValidationError("probe does not support the domain");
  }
  const double width = width_along(domain, probe.n);
  if (!(t >= 0.0) || t > width + tol::kGeometry * scale) {
    throw ValidationError("chord depth outside [0, width]");
  }
  t = std::min(t, width);

  const Vec2 tau = probe.tangent();
  const Point2 base = probe.x0 - t * probe.n;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 &p = poly.vertex(i);
    const Vec2 e = poly.vertex(i + 1) - p;
    const double len = norm(e);
    const double slope = cross(e, tau);
    const double offset = cross(e, base - p);
    if (std::abs(slope) <= tol::kGeometry * len) {
      if (offset < -tol::kMembership * scale * len) return {};
      continue;
    }
    const double s = -offset / slope;
    if (slope > 0.0) {
      lo = std::max(lo, s);
    } else {
      hi = std::min(hi, s);
    }
  }
  if (!(hi > lo)) return {};
  ChordLengths out{std::max(0.0, std::min(0.0, hi) - lo), std::max(0.0, hi - std::max(0.0, lo))};
  const double snap = tol::kGeometry * scale;
  if (out.lower <= snap) out.lower = 0.0;
  if (out.upper <= snap) out.upper = 0.0;
  return out;
}

RegularityReport regularity_classify(const Domain &domain, Point2 point) {
  const auto &poly = domain.shape;
  const double slack = tol::kMembership * poly.scale();
  if (!poly.contains(point, slack) || poly.boundary_distance(point) > slack) {
    throw ValidationError("point is not on the domain boundary");
  }
  const std::size_t n = poly.size();

  auto edge_dir = [&](std::size_t i) {
    const Vec2 e = poly.vertex(i + 1) - poly.vertex(i);
    return (1.0 / norm(e)) * e;
  };
  auto vertex_is_corner = [&](std::size_t i) {
    return cross(edge_dir(i + n - 1), edge_dir(i)) > tol::kGeometry;
  };

  RegularityReport report;
  std::optional<std::size_t> at_vertex;
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(poly.vertex(i), point) <= slack) {
      at_vertex = i;
      break;
    }
  }

  Vec2 normal;
  if (at_vertex && vertex_is_corner(*at_vertex)) {
    report.kind = BoundaryPointKind::corner;
    const Vec2 bisector = perp(edge_dir(*at_vertex + n - 1)) + perp(edge_dir(*at_vertex));
    normal = -1.0 * bisector;
  } else {
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double d = segment_distance(point, poly.vertex(i), poly.vertex(i + 1));
      if (d < best) {
        best = d;
        nearest = i;
      }
    }
    const Vec2 e = edge_dir(nearest);
    normal = Vec2{e.y, -e.x};
  }
  const SupportProbe probe = support_probe(domain, normal);
  report.contact_lower = probe.contact_lower;
  report.contact_upper = probe.contact_upper;

  if (report.kind == BoundaryPointKind::corner) {
    report.contact_regular = false;
    return report;
  }
  auto endpoint_regular = [&](Point2 p) {
    for (std::size_t i = 0; i < n; ++i) {
      if (distance(poly.vertex(i), p) <= slack) return !vertex_is_corner(i);
    }
    return true;
  };
  report.contact_regular = probe.degenerate() ||
                       (endpoint_regular(probe.contact_lower) && endpoint_regular(probe.contact_upper));
  return report;
}

}  // namespace leastres
