#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "leastres/geometry.hpp"
#include "leastres/pressure.hpp"
#include "leastres/roof.hpp"

namespace leastres {

/// Piecewise-linear radial height phi on the uniform grid r_i = i R / N.
struct RadialProfile {
  double radius = 1.0;
  std::vector<double> heights;  // phi_0 .. phi_N

  std::size_t segments() const { return heights.empty() ? 0 : heights.size() - 1; }
  double step() const { return radius / static_cast<double>(segments()); }
  double node(std::size_t i) const { return radius * static_cast<double>(i) / static_cast<double>(segments()); }
};

/// F = pi * sum_j f(|s_j|) (r_{j+1}^2 - r_j^2), exact for the piecewise-linear
/// profile. Throws for a non-radial model or a profile that is not a
/// nonnegative, nonincreasing, concave height list.
double radial_resistance(const RadialProfile &profile, const PressureModel &model);

/// Feasibility repair: clamp to [0, M], running minimum (nonincreasing), then
/// the least concave majorant of the result. Idempotent up to rounding.
std::vector<double> repair_profile(std::span<const double> heights, double height_cap);

struct RadialResult {
  RadialProfile profile;
  double resistance = 0.0;
  /// Resistance after every sweep, over all refinement levels.
  std::vector<double> trace;
  int sweeps = 0;
};

/// Cyclic coordinate descent on the heights: each coordinate gets a coarse
/// scan plus golden-section search over [0, M] of F(repair(phi with phi_i = h)),
/// once moving the node alone and once stretching the profile on both sides
/// of it; a move is kept only if it lowers F. Starts from the cone
/// M (1 - r/R) on a 16-segment grid and refines by doubling (then to N), with
/// at most `sweep_budget` sweeps per level; a level ends early once a sweep
/// gains less than 1e-8 of F. The coordinate order of each sweep is a
/// permutation drawn from `seed`.
RadialResult radial_solve(double radius, double height_cap, const PressureModel &model, int grid_size,
                          int sweep_budget, std::uint64_t seed);

enum class MoveKind { perturb = 0, add_plane = 1, delete_plane = 2, flatten = 3 };

inline constexpr std::array<const char *, 4> kMoveNames{"perturb", "add_plane", "delete_plane", "flatten"};

struct MoveStats {
  std::array<int, 4> proposed{};
  std::array<int, 4> accepted{};
};

struct SolveOptions {
  /// Number of equally spaced directions the radial profile is revolved to.
  int plane_budget = 64;
  int iterations = 2000;
  std::uint64_t seed = 1;
  /// Profile segments kept for the initial roof (greedy choice among the
  /// radial solution's segments).
  int profile_segments = 6;
  int radial_grid = 64;
  int radial_sweeps = 400;
  double initial_temperature = 0.1;  // fraction of the initial resistance
  double cooling = 0.995;            // per accepted move
  double step_scale = 0.02;          // perturbation size, fraction of M at T0
  int flatten_max_exponent = 10;     // flatten move schedule 2^0 .. 2^this
  /// Upper limit on the plane count; add moves beyond it are skipped.
  int max_planes = 0;  // 0: initial count + plane_budget
};

struct SolveReport {
  ConcaveRoof roof{{}, 0.0};
  double resistance = 0.0;
  SegmentMax boundary_flatness;
  int iterations = 0;
  std::uint64_t seed = 0;
  MoveStats moves;
  /// Best-so-far resistance after each iteration (index 0: initial roof).
  std::vector<double> trace;
  double initial_resistance = 0.0;
  /// radial_solve resistance on the disc of the domain's circumradius.
  double radial_resistance = 0.0;
};

/// Simulated annealing over plane envelopes, initialised from the revolved
/// radial solution. Keeps and returns the best roof seen. Throws
/// ValidationError for plane_budget < 3, iterations < 0, a negative cap or a
/// non-radial model.
SolveReport solve_roof(const Domain &domain, const PressureModel &model, double height_cap,
                       const SolveOptions &options);

/// The initial roof on its own: planes extending the selected radial
/// segments, one copy per direction, each scaled so it reaches zero on the
/// domain's supporting line in that direction.
ConcaveRoof radial_roof(const Domain &domain, const RadialProfile &profile, double height_cap, int directions,
                        int segments, const PressureModel &model);

}  // namespace leastres
