#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "leastres/error.hpp"
#include "leastres/random.hpp"
#include "leastres/solver.hpp"

namespace leastres {

namespace {

constexpr int kCoarsestGrid = 16;
constexpr int kGoldenIterations = 40;
constexpr int kScanPoints = 16;
// A sweep gaining less than this fraction of F ends the level.
constexpr double kSweepTolerance = 1e-8;

void require_radial(const PressureModel &model) {
  if (!model.radial()) throw ValidationError("radial problems need a pressure law of |gradient| only");
}

// F for heights on a uniform grid, no validation.
double profile_resistance(std::span<const double> phi, double radius, const PressureModel &model) {
  const std::size_t n = phi.size() - 1;
  const double h = radius / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double slope = std::abs(phi[j + 1] - phi[j]) / h;
    // r_{j+1}^2 - r_j^2 = h^2 (2j + 1)
    total += model.of_modulus(slope) * static_cast<double>(2 * j + 1);
  }
  return std::numbers::pi * h * h * total;
}

// Samples the piecewise-linear profile at n + 1 uniform nodes.
std::vector<double> resample(std::span<const double> phi, std::size_t n) {
  const std::size_t m = phi.size() - 1;
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) * static_cast<double>(m) / static_cast<double>(n);
    const std::size_t j = std::min(static_cast<std::size_t>(s), m - 1);
    const double w = s - static_cast<double>(j);
    out[i] = (1.0 - w) * phi[j] + w * phi[j + 1];
  }
  return out;
}

// Minimizer estimate of g on [0, M]: coarse scan to bracket (g is not
// unimodal in general), then golden-section refinement inside the bracket.
template <class Objective>
double line_search(Objective &&g, double height_cap) {
  double best_scan = std::numeric_limits<double>::infinity();
  int best_j = 0;
  for (int j = 0; j <= kScanPoints; ++j) {
    const double f = g(height_cap * j / kScanPoints);
    if (f < best_scan) {
      best_scan = f;
      best_j = j;
    }
  }
  double lo = height_cap * std::max(0, best_j - 1) / kScanPoints;
  double hi = height_cap * std::min(kScanPoints, best_j + 1) / kScanPoints;
  const double inv_golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_golden * (hi - lo), x2 = lo + inv_golden * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < kGoldenIterations; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_golden * (hi - lo);
      f1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_golden * (hi - lo);
      f2 = g(x2);
    }
  }
  const double golden = f1 <= f2 ? x1 : x2;
  const double scanned = height_cap * best_j / kScanPoints;
  return std::min(f1, f2) <= best_scan ? golden : scanned;
}

// Clamp, running minimum, then the least concave majorant: the upper hull of
// the points (r_i, phi_i), which stays nonincreasing and within [0, M]
// because the input already is. `hull` is scratch.
void repair_in_place(std::vector<double> &phi, double height_cap, std::vector<std::size_t> &hull) {
  if (phi.size() < 2) return;
  for (auto &v : phi) v = std::clamp(v, 0.0, height_cap);
  for (std::size_t i = 1; i < phi.size(); ++i) phi[i] = std::min(phi[i], phi[i - 1]);
  hull.clear();
  for (std::size_t i = 0; i < phi.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      // b lies on or below the chord a -> i: drop it.
      const double lhs = (phi[b] - phi[a]) * static_cast<double>(i - a);
      const double rhs = (phi[i] - phi[a]) * static_cast<double>(b - a);
      if (lhs <= rhs) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const std::size_t a = hull[k], b = hull[k + 1];
    for (std::size_t i = a + 1; i < b; ++i) {
      const double w = static_cast<double>(i - a) / static_cast<double>(b - a);
      phi[i] = (1.0 - w) * phi[a] + w * phi[b];
    }
  }
}

}  // namespace

double radial_resistance(const RadialProfile &profile, const PressureModel &model) {
  require_radial(model);
  if (!(profile.radius > 0.0) || !std::isfinite(profile.radius)) {
    throw ValidationError("profile radius must be positive");
  }
  const auto &phi = profile.heights;
  if (phi.size() < 2) throw ValidationError("profile needs at least one segment");
  double top = 0.0;
  for (double v : phi) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("profile heights must be finite and nonnegative");
    top = std::max(top, v);
  }
  const double slack = 1e-12 * (1.0 + top);
  for (std::size_t i = 0; i + 1 < phi.size(); ++i) {
    if (phi[i + 1] > phi[i] + slack) throw ValidationError("profile must be nonincreasing");
    if (i > 0 && phi[i + 1] - 2.0 * phi[i] + phi[i - 1] > slack) {
      throw ValidationError("profile must be concave");
    }
  }
  return profile_resistance(phi, profile.radius, model);
}

std::vector<double> repair_profile(std::span<const double> heights, double height_cap) {
  std::vector<double> phi(heights.begin(), heights.end());
  std::vector<std::size_t> hull;
  repair_in_place(phi, height_cap, hull);
  return phi;
}

RadialResult radial_solve(double radius, double height_cap, const PressureModel &model, int grid_size,
                          int sweep_budget, std::uint64_t seed) {
  require_radial(model);
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("radius must be positive");
  if (!(height_cap >= 0.0) || !std::isfinite(height_cap)) throw ValidationError("height cap must be >= 0");
  if (grid_size < kCoarsestGrid) throw ValidationError("radial grid needs at least 16 segments");
  if (sweep_budget < 1) throw ValidationError("sweep budget must be at least 1");

  RadialResult result;
  const auto n_final = static_cast<std::size_t>(grid_size);
  if (height_cap == 0.0) {
    result.profile = {radius, std::vector<double>(n_final + 1, 0.0)};
    result.resistance = profile_resistance(result.profile.heights, radius, model);
    result.trace.push_back(result.resistance);
    return result;
  }

  std::size_t n = std::min<std::size_t>(kCoarsestGrid, n_final);
  std::vector<double> phi(n + 1);
  for (std::size_t i = 0; i <= n; ++i) phi[i] = height_cap * (1.0 - static_cast<double>(i) / static_cast<double>(n));

  std::uint64_t level = 0;
  for (;;) {
    double current = profile_resistance(phi, radius, model);
    std::vector<std::size_t> order(n + 1);
    std::vector<double> trial(n + 1);
    std::vector<std::size_t> hull;
    for (int sweep = 0; sweep < sweep_budget; ++sweep) {
      const double at_start = current;
      std::iota(order.begin(), order.end(), 0);
      for (std::size_t i = order.size() - 1; i > 0; --i) {
        const double u = counter_uniform(seed, level, static_cast<std::uint64_t>(sweep), i);
        std::swap(order[i], order[static_cast<std::size_t>(u * static_cast<double>(i + 1))]);
      }
      for (const std::size_t i : order) {
        // Two line searches on phi_i: moving the node alone, and moving it
        // while stretching each side vertically (M - phi scaled on the left,
        // phi scaled on the right). The second one is what lets the flat top
        // widen while the rest of the profile steepens.
        for (int mode = 0; mode < 2; ++mode) {
          const double old = phi[i];
          if (mode == 1 && (old <= 0.0 || old >= height_cap)) continue;
          auto objective = [&](double h) {
            trial = phi;
            if (mode == 0) {
              trial[i] = h;
            } else {
              const double left = (height_cap - h) / (height_cap - old);
              const double right = h / old;
              for (std::size_t j = 0; j < i; ++j) trial[j] = height_cap - (height_cap - phi[j]) * left;
              trial[i] = h;
              for (std::size_t j = i + 1; j < trial.size(); ++j) trial[j] = phi[j] * right;
            }
            repair_in_place(trial, height_cap, hull);
            return profile_resistance(trial, radius, model);
          };
          const double found = line_search(objective, height_cap);
          const double value = objective(found);
          if (value < current) {
            phi = trial;
            current = value;
          }
        }
      }
      repair_in_place(phi, height_cap, hull);
      current = profile_resistance(phi, radius, model);
      result.trace.push_back(current);
      ++result.sweeps;
      if (at_start - current <= kSweepTolerance * at_start) break;
    }
    if (n == n_final) break;
    n = std::min(2 * n, n_final);
    phi = repair_profile(resample(phi, n), height_cap);
    ++level;
  }

  result.profile = {radius, phi};
  result.resistance = profile_resistance(phi, radius, model);
  return result;
}

}  // namespace leastres
