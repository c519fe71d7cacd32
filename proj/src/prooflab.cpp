#include "leastres/prooflab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "leastres/error.hpp"
#include "leastres/tolerance.hpp"
#include "leastres/truncation.hpp"

namespace leastres {

ConvexPolygon compress(const ConvexPolygon &poly, const SupportProbe &probe, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw ValidationError("compression ratio must lie in (0, 1]");
  if (theta == 1.0) return poly;
  const Vec2 n = probe.n;
  const double keep = 1.0 - theta;
  // A = theta I + (1 - theta) n n^T, b = (1 - theta) (x0 - (x0, n) n).
  const Vec2 offset = keep * (probe.x0 - dot(probe.x0, n) * n);
  return poly.map_affine(theta + keep * n.x * n.x, keep * n.x * n.y, keep * n.x * n.y,
                         theta + keep * n.y * n.y, offset);
}

namespace {

struct Halfspace {
  std::array<double, 3> a;
  double b;
};

}  // namespace

double envelope_sup_lp(const ConcaveRoof &roof, const ConvexPolygon &region) {
  std::vector<Halfspace> rows;
  for (std::size_t i = 0; i <= roof.cap_index(); ++i) {
    const AffinePlane p = roof.plane(i);
    rows.push_back({{-p.g.x, -p.g.y, 1.0}, p.c});
  }
  for (std::size_t j = 0; j < region.size(); ++j) {
    const Point2 &p = region.vertex(j);
    const Vec2 e = region.vertex(j + 1) - p;
    const Vec2 inward = (1.0 / norm(e)) * perp(e);
    rows.push_back({{-inward.x, -inward.y, 0.0}, -dot(inward, p)});
  }

  const double slack = 1e-9 * (1.0 + region.scale() + roof.height_cap());
  double best = -std::numeric_limits<double>::infinity();
  const std::size_t m = rows.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t l = j + 1; l < m; ++l) {
        const auto &r0 = rows[i].a;
        const auto &r1 = rows[j].a;
        const auto &r2 = rows[l].a;
        const double det = r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) -
                           r0[1] * (r1[0] * r2[2] - r1[2] * r2[0]) +
                           r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
        const double size = std::hypot(r0[0], r0[1], r0[2]) * std::hypot(r1[0], r1[1], r1[2]) *
                            std::hypot(r2[0], r2[1], r2[2]);
        if (std::abs(det) <= 1e-12 * size) continue;
        const double b0 = rows[i].b, b1 = rows[j].b, b2 = rows[l].b;
        // Cramer's rule.
        const double dx = b0 * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (b1 * r2[2] - r1[2] * b2) +
                          r0[2] * (b1 * r2[1] - r1[1] * b2);
        const double dy = r0[0] * (b1 * r2[2] - r1[2] * b2) - b0 * (r1[0] * r2[2] - r1[2] * r2[0]) +
                          r0[2] * (r1[0] * b2 - b1 * r2[0]);
        const double dt = r0[0] * (r1[1] * b2 - b1 * r2[1]) - r0[1] * (r1[0] * b2 - b1 * r2[0]) +
                          b0 * (r1[0] * r2[1] - r1[1] * r2[0]);
        const std::array<double, 3> z{dx / det, dy / det, dt / det};
        if (!(z[2] > best)) continue;
        bool feasible = true;
        for (const auto &row : rows) {
          if (row.a[0] * z[0] + row.a[1] * z[1] + row.a[2] * z[2] > row.b + slack) {
            feasible = false;
            break;
          }
        }
        if (feasible) best = z[2];
      }
    }
  }
  return best;
}

double envelope_sup_grid(const ConcaveRoof &roof, const ConvexPolygon &region,
                         const SupportProbe &probe, int grid) {
  if (grid < 2) throw ValidationError("grid needs at least 2 points per side");
  const Vec2 tau = probe.tangent();
  double smin = std::numeric_limits<double>::infinity(), smax = -smin;
  double tmin = smin, tmax = -smin;
  for (const auto &v : region.vertices()) {
    const double s = dot(v - probe.x0, tau);
    const double t = dot(probe.x0 - v, probe.n);
    smin = std::min(smin, s);
    smax = std::max(smax, s);
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  }
  const double slack = tol::kGeometry * region.scale();
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double s = smin + (smax - smin) * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double t = tmin + (tmax - tmin) * j / (grid - 1);
      const Point2 x = probe.x0 + s * tau - t * probe.n;
      if (region.contains(x, slack)) best = std::max(best, roof.value(x));
    }
  }
  return best;
}

DiagnosticsFrame diagnostics_frame(const ConcaveRoof &roof, const SupportProbe &probe,
                                   const Domain &domain, const PressureModel &model, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("diagnostics need k > 0");
  const auto omega = omega_k(roof, probe, k, domain);
  if (!omega) throw ValidationError("Ω_k is empty; the diagnostics frame is undefined");

  DiagnosticsFrame frame;
  frame.k = k;
  frame.probe = probe;
  const double tie = tol::kTie * (1.0 + roof.height_cap());
  if (probe.degenerate()) {
    frame.z0 = roof.value(probe.x0);
  } else {
    const SegmentMax top = max_on_segment(roof, probe.contact_lower, probe.contact_upper);
    frame.z0 = top.value;
    if (roof.value(probe.x0) < top.value - tie) frame.probe.x0 = top.point;
  }
  const SupportProbe &p = frame.probe;
  const double z0 = frame.z0;
  if (!(z0 > 0.0)) throw ValidationError("u vanishes on the contact segment; Ω_k is degenerate");

  frame.omega_k_area = omega->area();
  frame.omega_k.assign(omega->vertices().begin(), omega->vertices().end());
  frame.alpha_k = std::max(0.0, envelope_sup_lp(roof, *omega) - z0);

  double depth = 0.0;
  for (const auto &v : omega->vertices()) depth = std::max(depth, dot(p.x0 - v, p.n));
  frame.beta_k = k * depth - z0;

  const double t_half = z0 / (2.0 * k);
  if (t_half <= width_along(domain, p.n)) {
    const ChordLengths ab = chord_lengths(domain, p, t_half);
    frame.chord_lower = ab.lower;
    frame.chord_upper = ab.upper;
  }
  const double a = frame.chord_lower;
  const double b = frame.chord_upper;
  frame.degenerate = !(a > 0.0 && b > 0.0);

  const double ka = k * a;
  const double kb = k * b;
  const double raw_theta = 1.0 / std::sqrt(ka) + 1.0 / std::sqrt(kb) + std::sqrt(frame.alpha_k);
  const double theta = std::min(0.99, raw_theta);
  frame.theta_k = theta;

  const double alpha = frame.alpha_k;
  const double beta = frame.beta_k;
  frame.hk1 = 1.0 / (2.0 * alpha / (z0 * z0 * theta) +
                     (1.0 / (1.0 - theta)) * (1.0 / (ka * theta) + 1.0 / (kb * theta)) +
                     (4.0 / (1.0 - theta)) * (z0 + beta) / (z0 * z0));
  frame.hk2 = 1.0 / ((4.0 * alpha / theta) * (z0 + beta) / (z0 * z0 * z0) + 1.0 / (ka * theta) +
                     1.0 / (kb * theta));
  frame.area_ratio_bound =
      (theta / 4.0) * (z0 + 2.0 * beta) * (z0 + 2.0 * beta) / ((z0 + beta) * (z0 + beta));

  const double f_cut = model(-k * p.n);
  frame.normalized_gain = resistance_delta(roof, p, k, domain, model) / (f_cut * frame.omega_k_area);

  frame.omega_k_plus = halfplane_clip(*omega, -1.0 * p.n, dot(p.x0, p.n) - t_half);
  if (!frame.omega_k_plus) {
    frame.degenerate = true;
    frame.infinf_bound = -1.0;
    return frame;
  }
  frame.tilde_omega = compress(*frame.omega_k_plus, p, theta);
  const ConvexPolygon &tilde = *frame.tilde_omega;
  frame.area_ratio = tilde.area() / frame.omega_k_area;

  const double slack = tol::kMembership * omega->scale();
  for (const auto &v : tilde.vertices()) {
    if (!omega->contains(v, slack)) frame.tilde_inside_omega = false;
  }

  double steepest = 0.0;
  double weakest = std::numeric_limits<double>::infinity();
  for (const auto &cell : cell_decomposition(roof, tilde).cells) {
    const Vec2 g = roof.plane(cell.plane_index).g;
    const double slope = norm(g);
    steepest = std::max(steepest, slope);
    weakest = std::min(weakest, (1.0 + slope) * model(g) / (k * f_cut));
  }
  frame.ur1 = steepest / k;
  frame.ur2 = frame.area_ratio / ((1.0 + steepest) / k);
  frame.infinf_bound = frame.ur2 * weakest - 1.0;
  return frame;
}

std::vector<DiagnosticsFrame> diagnostics_sweep(const ConcaveRoof &roof, const SupportProbe &probe,
                                                const Domain &domain, const PressureModel &model,
                                                std::span<const double> ks) {
  std::vector<DiagnosticsFrame> frames;
  frames.reserve(ks.size());
  for (const double k : ks) frames.push_back(diagnostics_frame(roof, probe, domain, model, k));
  return frames;
}

}  // namespace leastres
