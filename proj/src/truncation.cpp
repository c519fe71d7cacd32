#include "leastres/truncation.hpp"

#include <cmath>
#include <sstream>

#include "leastres/error.hpp"
#include "leastres/tolerance.hpp"

namespace leastres {

namespace {

void require_positive_slope(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("truncation slope k must be positive");
}

// Keeps {x : l(x) >= k (x0 - x, n)} within `poly`.
std::optional<ConvexPolygon> clip_above_cut(const ConvexPolygon &poly, const AffinePlane &plane,
                                            const AffinePlane &cut, double tie) {
  const Vec2 g = plane.g - cut.g;
  const double c = plane.c - cut.c;
  if (g.x == 0.0 && g.y == 0.0) {
    if (c < -tie) return std::nullopt;
    return poly;
  }
  return halfplane_clip(poly, g, c);
}

}  // namespace

AffinePlane cutting_plane(const SupportProbe &probe, double k) {
  return AffinePlane{-k * probe.n, k * dot(probe.x0, probe.n)};
}

ConcaveRoof truncate(const ConcaveRoof &roof, const SupportProbe &probe, double k) {
  require_positive_slope(k);
  return roof.with_plane(cutting_plane(probe, k));
}

std::optional<ConvexPolygon> omega_k(const ConcaveRoof &roof, const SupportProbe &probe, double k,
                                     const Domain &domain) {
  require_positive_slope(k);
  const AffinePlane cut = cutting_plane(probe, k);
  const double tie = tol::kTie * (1.0 + roof.height_cap());
  std::optional<ConvexPolygon> region = domain.shape;
  for (std::size_t i = 0; i <= roof.cap_index() && region; ++i) {
    region = clip_above_cut(*region, roof.plane(i), cut, tie);
  }
  return region;
}

double resistance_delta(const ConcaveRoof &roof, const SupportProbe &probe, double k,
                        const Domain &domain, const PressureModel &model) {
  require_positive_slope(k);
  const AffinePlane cut = cutting_plane(probe, k);
  const double tie = tol::kTie * (1.0 + roof.height_cap());

  double inside = 0.0;
  double inside_area = 0.0;
  for (const auto &cell : cell_decomposition(roof, domain).cells) {
    const AffinePlane plane = roof.plane(cell.plane_index);
    const auto part = clip_above_cut(cell.region, plane, cut, tie);
    if (!part) continue;
    inside += part->area() * model(plane.g);
    inside_area += part->area();
  }
  const auto omega = omega_k(roof, probe, k, domain);
  const double omega_area = omega ? omega->area() : 0.0;
  const double gain = inside - model(cut.g) * omega_area;

  const double before = resistance_exact(roof, domain, model);
  const double after = resistance_exact(truncate(roof, probe, k), domain, model);
  const double direct = before - after;
  if (std::abs(direct - gain) > tol::kGainAgreement * std::max(1.0, before)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "resistance gain routes disagree at k = " << k << ": per-cell " << gain
        << ", two-evaluation " << direct << " (cell area in Ω_k " << inside_area << ", |Ω_k| "
        << omega_area << ")";
    throw ConsistencyError(msg.str());
  }
  return gain;
}

std::optional<TruncationResult> flatten_search(const ConcaveRoof &roof, const SupportProbe &probe,
                                               const Domain &domain, const PressureModel &model,
                                               std::span<const double> k_schedule) {
  if (k_schedule.empty()) throw ValidationError("flatten search needs a nonempty k schedule");
  for (std::size_t i = 0; i < k_schedule.size(); ++i) {
    require_positive_slope(k_schedule[i]);
    if (i > 0 && !(k_schedule[i] > k_schedule[i - 1])) {
      throw ValidationError("k schedule must be strictly increasing");
    }
  }
  for (const double k : k_schedule) {
    const double gain = resistance_delta(roof, probe, k, domain, model);
    if (gain > tol::kImprovement) {
      return TruncationResult{k, truncate(roof, probe, k), omega_k(roof, probe, k, domain), gain};
    }
  }
  return std::nullopt;
}

std::vector<double> geometric_schedule(int max_exponent) {
  std::vector<double> ks;
  for (int e = 0; e <= max_exponent; ++e) ks.push_back(std::ldexp(1.0, e));
  return ks;
}

}  // namespace leastres
