#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "leastres/geometry.hpp"
#include "leastres/pressure.hpp"
#include "leastres/vec2.hpp"

namespace leastres {

/// l(x) = g.x + c
struct AffinePlane {
  Vec2 g;
  double c = 0.0;

  double operator()(Point2 x) const { return dot(g, x) + c; }
  friend bool operator==(const AffinePlane &, const AffinePlane &) = default;
};

/// Capped lower envelope u(x) = min(M, min_i l_i(x)).
///
/// The cap plane (g = 0, c = M) is always part of the envelope; it carries
/// index planes().size() wherever planes are indexed. Feasibility on a domain
/// (every plane nonnegative at every vertex, hence u >= 0) is a property of
/// the pair and is checked by is_feasible().
class ConcaveRoof {
 public:
  /// Throws ValidationError for non-finite planes or a negative cap.
  ConcaveRoof(std::vector<AffinePlane> planes, double height_cap);

  std::span<const AffinePlane> planes() const { return planes_; }
  double height_cap() const { return cap_; }
  std::size_t cap_index() const { return planes_.size(); }
  /// Plane i, where i == cap_index() denotes the cap.
  AffinePlane plane(std::size_t i) const;

  /// Envelope value without any domain check.
  double value(Point2 x) const;

  ConcaveRoof with_plane(AffinePlane p) const;

 private:
  std::vector<AffinePlane> planes_;
  double cap_ = 0.0;
};

bool is_feasible(const ConcaveRoof &roof, const Domain &domain);

/// u(x). Throws ValidationError when x lies outside the domain.
double eval_height(const ConcaveRoof &roof, Point2 x, const Domain &domain);

struct ActivePlane {
  Vec2 gradient;
  std::size_t index = 0;
};

/// Gradient of the unique active plane at x, or nullopt (the tie marker) when
/// two active planes with different gradients agree within
/// tol::kTie * (1 + M). Throws when x lies outside the domain.
std::optional<ActivePlane> gradient_ae(const ConcaveRoof &roof, Point2 x, const Domain &domain);

struct Cell {
  std::size_t plane_index = 0;
  ConvexPolygon region;
};

struct CellDecomposition {
  std::vector<Cell> cells;

  double total_area() const;
};

/// Regions where each plane is the active one, cell_i = R ∩ {l_i <= l_j for
/// all j}. Ties go to the lower index; empty cells are omitted.
CellDecomposition cell_decomposition(const ConcaveRoof &roof, const ConvexPolygon &region);
CellDecomposition cell_decomposition(const ConcaveRoof &roof, const Domain &domain);

/// Exact F(u) = sum over cells of area * f(gradient).
double resistance_exact(const ConcaveRoof &roof, const Domain &domain, const PressureModel &model);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Rejection sampling over the domain's bounding box with a counter-based
/// stream: sample i depends only on (seed, i). Tie samples are redrawn.
/// Throws for sample_count < 1000.
MonteCarloEstimate resistance_montecarlo(const ConcaveRoof &roof, const Domain &domain,
                                         const PressureModel &model, std::size_t sample_count,
                                         std::uint64_t seed);

struct SegmentMax {
  double value = 0.0;
  Point2 point;
};

/// Exact maximum of u on the segment [a, b]; u restricted to a segment is
/// concave piecewise linear, so the maximum is found by walking the active
/// lines from a toward b.
SegmentMax max_on_segment(const ConcaveRoof &roof, Point2 a, Point2 b);

/// Maximum of u over the domain boundary.
SegmentMax boundary_max(const ConcaveRoof &roof, const Domain &domain);

/// Raises each plane until it is nonnegative at every domain vertex, then
/// drops planes that are >= M at every vertex (dominated by the cap).
ConcaveRoof project_feasible(const ConcaveRoof &roof, const Domain &domain);

/// Distance from x to the zero line {l = 0} of a non-horizontal plane,
/// computed from an explicit foot point rather than |l(x)| / |g|.
double zero_line_distance(const AffinePlane &plane, Point2 x);

}  // namespace leastres
