#pragma once

// Every numeric tolerance used by the library. Geometric tolerances are
// relative to the diameter (or area) of the polygon being processed.
namespace leastres::tol {

// Vertex coincidence and collinearity, relative to polygon diameter.
inline constexpr double kGeometry = 1e-12;
// Membership of a point in a domain / on its boundary, relative to diameter.
inline constexpr double kMembership = 1e-9;
// Clip results with area below this fraction of the input area are empty.
inline constexpr double kEmptyArea = 1e-12;
// Unit-length check for directions and normals.
inline constexpr double kUnit = 1e-12;
// Plane nonnegativity at domain vertices (absolute).
inline constexpr double kFeasible = 1e-9;
// Two planes tie when their values agree within kTie * (1 + M).
inline constexpr double kTie = 1e-12;
// Minimum resistance gain accepted as an improvement (absolute).
inline constexpr double kImprovement = 1e-12;
// Relative agreement of the two resistance-gain evaluation routes.
inline constexpr double kGainAgreement = 1e-10;

}  // namespace leastres::tol
