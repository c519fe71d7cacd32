#pragma once

#include <optional>
#include <span>
#include <vector>

#include "leastres/geometry.hpp"
#include "leastres/pressure.hpp"
#include "leastres/roof.hpp"

namespace leastres {

/// T_theta x = theta x + (1 - theta) ((x - x0, n) n + x0): keeps the depth
/// along n and scales the offset from the axis x0 + xi n by theta. Area
/// scales by exactly theta. Throws for theta outside (0, 1].
ConvexPolygon compress(const ConvexPolygon &poly, const SupportProbe &probe, double theta);

/// sup of u over a polygon, solved as the linear program
///   maximize t  subject to  t <= l_i(x) for every plane (cap included),
///                           x in region,
/// by enumerating the basic solutions of its three-variable constraint set.
double envelope_sup_lp(const ConcaveRoof &roof, const ConvexPolygon &region);

/// Same supremum estimated on a grid x x grid lattice laid out in the probe's
/// (tangent, normal) frame over the region's extent. A lower bound for the
/// LP value.
double envelope_sup_grid(const ConcaveRoof &roof, const ConvexPolygon &region,
                         const SupportProbe &probe, int grid = 400);

/// Every quantity of the flattening construction at one slope k.
struct DiagnosticsFrame {
  double k = 0.0;
  /// x0 moved to the maximizer of u on the contact segment (kept at the
  /// probe's x0 when that already attains the maximum).
  SupportProbe probe;
  double z0 = 0.0;
  double alpha_k = 0.0;
  double beta_k = 0.0;
  double chord_lower = 0.0;  // a(z0 / 2k)
  double chord_upper = 0.0;  // b(z0 / 2k)
  double theta_k = 0.0;
  double omega_k_area = 0.0;
  std::vector<Point2> omega_k;
  std::optional<ConvexPolygon> omega_k_plus;
  std::optional<ConvexPolygon> tilde_omega;
  double ur1 = 0.0;
  double ur2 = 0.0;
  double area_ratio = 0.0;
  double area_ratio_bound = 0.0;
  double hk1 = 0.0;
  double hk2 = 0.0;
  double infinf_bound = 0.0;
  double normalized_gain = 0.0;
  /// a or b vanishes at z0 / 2k (vertex contact), or the upper part of Ω_k is
  /// empty. Quantities that divide by these are then 0 or clamped.
  bool degenerate = false;
  /// Whether the compressed region lies inside Ω_k.
  bool tilde_inside_omega = true;
};

/// Throws ValidationError when Ω_k is empty (e.g. u vanishes on the contact
/// segment) or k <= 0.
DiagnosticsFrame diagnostics_frame(const ConcaveRoof &roof, const SupportProbe &probe,
                                   const Domain &domain, const PressureModel &model, double k);

/// Frames for each k, in the order given.
std::vector<DiagnosticsFrame> diagnostics_sweep(const ConcaveRoof &roof, const SupportProbe &probe,
                                                const Domain &domain, const PressureModel &model,
                                                std::span<const double> ks);

}  // namespace leastres
