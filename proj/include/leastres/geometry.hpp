#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "leastres/vec2.hpp"

namespace leastres {

/// Convex polygon with counterclockwise vertices and positive area.
///
/// Instances are immutable. `from_vertices` validates the vertex list; the
/// clipping and mapping routines below produce polygons that are valid by
/// construction.
class ConvexPolygon {
 public:
  /// Throws ValidationError for fewer than 3 vertices, non-positive signed
  /// area, reflex vertices, or coincident consecutive vertices.
  static ConvexPolygon from_vertices(std::vector<Point2> vertices);

  std::span<const Point2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point2 &vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }

  double area() const { return area_; }
  /// Largest vertex-to-vertex distance.
  double diameter() const;
  /// Diagonal of the bounding box; within a factor sqrt(2) of the diameter and
  /// O(n) to compute. All relative tolerances are scaled by this.
  double scale() const { return scale_; }
  Point2 centroid() const;

  /// True when `p` lies in the polygon or within `slack` of it.
  bool contains(Point2 p, double slack = 0.0) const;
  /// Euclidean distance from `p` to the boundary.
  double boundary_distance(Point2 p) const;

  /// Image under x -> A x + b with det(A) > 0, where A = [[a00, a01], [a10, a11]].
  ConvexPolygon map_affine(double a00, double a01, double a10, double a11, Vec2 offset) const;

 private:
  struct Trusted {};
  ConvexPolygon(std::vector<Point2> vertices, Trusted);

  friend std::optional<ConvexPolygon> halfplane_clip(const ConvexPolygon &, Vec2, double);

  std::vector<Point2> vertices_;
  double area_ = 0.0;
  double scale_ = 0.0;
};

/// Signed shoelace area; positive for counterclockwise order.
double signed_area(std::span<const Point2> vertices);

/// Intersection of `poly` with {x : g.x + c >= 0}. Returns nullopt when the
/// result has area below tol::kEmptyArea * area(poly). Clipping by a
/// half-plane that already contains the polygon returns it unchanged.
/// Throws ValidationError when g is zero or non-finite.
std::optional<ConvexPolygon> halfplane_clip(const ConvexPolygon &poly, Vec2 g, double c);

/// Intersection of two convex polygons, or nullopt if (numerically) empty.
std::optional<ConvexPolygon> intersect(const ConvexPolygon &a, const ConvexPolygon &b);

struct DiscShape {
  Point2 center;
  double radius = 1.0;
  int segments = 64;
};

struct ExplicitShape {};

/// Planar convex body on which functions u are defined.
struct Domain {
  ConvexPolygon shape;
  std::variant<ExplicitShape, DiscShape> provenance;

  double area() const { return shape.area(); }
  double diameter() const { return shape.diameter(); }
  /// Membership with slack tol::kMembership * scale.
  bool contains(Point2 p) const;
};

Domain make_polygon_domain(std::vector<Point2> vertices);
/// Regular polygon inscribed in the circle, vertices at angles 2*pi*j/segments.
Domain make_disc_domain(Point2 center, double radius, int segments);

/// Support line {x : (x0 - x, n) = 0} of a domain at a boundary point.
///
/// The contact segment l ∩ ∂Ω runs from `contact_lower` to `contact_upper`,
/// ordered along the tangent perp(n). It degenerates to a single vertex when
/// n is not an edge normal.
struct SupportProbe {
  Point2 x0;
  Vec2 n;
  Point2 contact_lower;
  Point2 contact_upper;

  /// perp(n); the "upper" direction of the chord functions.
  Vec2 tangent() const { return perp(n); }
  bool degenerate() const { return contact_lower == contact_upper; }
};

/// Probe in the given direction, with x0 at the midpoint of the contact
/// segment. Nonzero directions are normalized; zero or non-finite ones throw.
SupportProbe support_probe(const Domain &domain, Vec2 direction);

/// Probe with a caller-chosen x0; x0 must lie on the contact segment of the
/// support line with normal n.
SupportProbe make_probe(const Domain &domain, Point2 x0, Vec2 n);

/// Probe at the midpoint of edge `edge` (from vertex edge to edge+1), with the
/// edge's outward normal.
SupportProbe edge_probe(const Domain &domain, std::size_t edge);

/// Distance of the domain's supporting lines with normal n: the admissible
/// range of depths t for chord_lengths.
double width_along(const Domain &domain, Vec2 n);

struct ChordLengths {
  double lower = 0.0;  // a(t)
  double upper = 0.0;  // b(t)
};

/// Lengths of the two parts into which the axis {x0 - xi n} splits the chord
/// Ω ∩ {(x0 - x, n) = t}. Throws for t outside [0, width] or a probe that
/// does not support the domain.
ChordLengths chord_lengths(const Domain &domain, const SupportProbe &probe, double t);

enum class BoundaryPointKind { regular, corner };

struct RegularityReport {
  BoundaryPointKind kind = BoundaryPointKind::regular;
  /// Whether the point together with its contact segment's endpoints satisfy
  /// the regularity requirement for flattening at that point. On a polygon
  /// this is always false: contact endpoints are vertices with two distinct
  /// edge normals.
  bool contact_regular = false;
  Point2 contact_lower;
  Point2 contact_upper;
};

/// Classifies a boundary point. Throws if the point is farther than
/// tol::kMembership * scale from the boundary.
RegularityReport regularity_classify(const Domain &domain, Point2 point);

}  // namespace leastres
