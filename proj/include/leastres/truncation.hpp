#pragma once

#include <optional>
#include <span>

#include "leastres/geometry.hpp"
#include "leastres/pressure.hpp"
#include "leastres/roof.hpp"

namespace leastres {

/// The cutting plane x -> k (x0 - x, n) through the support line.
AffinePlane cutting_plane(const SupportProbe &probe, double k);

/// u^(k) = min(u, k (x0 - x, n)): the roof with the cutting plane appended.
/// Throws ValidationError for k <= 0.
ConcaveRoof truncate(const ConcaveRoof &roof, const SupportProbe &probe, double k);

/// Ω_k = {x in Ω : u(x) >= k (x0 - x, n)}, or nullopt when it has no area.
std::optional<ConvexPolygon> omega_k(const ConcaveRoof &roof, const SupportProbe &probe, double k,
                                     const Domain &domain);

/// F(u) - F(u^(k)) = ∫_{Ω_k} f(∇u) - f(-k n) |Ω_k|.
///
/// Evaluated per envelope cell (inside cell i, u = l_i, so cell ∩ Ω_k is a
/// single clip) and cross-checked against two full resistance evaluations;
/// a disagreement beyond tol::kGainAgreement throws ConsistencyError.
double resistance_delta(const ConcaveRoof &roof, const SupportProbe &probe, double k,
                        const Domain &domain, const PressureModel &model);

struct TruncationResult {
  double k = 0.0;
  ConcaveRoof truncated;
  std::optional<ConvexPolygon> omega;
  double delta_f = 0.0;
};

/// Smallest scheduled k whose gain exceeds tol::kImprovement, or nullopt.
/// The schedule must be nonempty and strictly increasing.
std::optional<TruncationResult> flatten_search(const ConcaveRoof &roof, const SupportProbe &probe,
                                               const Domain &domain, const PressureModel &model,
                                               std::span<const double> k_schedule);

/// 1, 2, 4, ..., 2^max_exponent.
std::vector<double> geometric_schedule(int max_exponent);

}  // namespace leastres
