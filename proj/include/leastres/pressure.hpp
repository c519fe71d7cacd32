#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leastres/vec2.hpp"

namespace leastres {

enum class PressureKind { newton, tangential, powerlaw, custom };

/// Analytic knowledge of the growth condition
///   (1+|x|) f(x) / (|y| f(y)) -> +inf  as  (1+|x|)/|y| -> 0.
enum class GrowthCondition { holds, fails, unknown };

/// Positive continuous pressure law f of the surface gradient.
///
///   newton      f(x) = 1 / (1 + |x|^2)
///   tangential  f(x) = 1 - |x| / sqrt(1 + |x|^2)
///   powerlaw    f(x) = c (1 + |x|)^(-alpha),  c > 0, alpha > 0
///   custom      caller-supplied callable, checked for positivity and
///               continuity on a sample grid at construction
class PressureModel {
 public:
  static PressureModel newton();
  static PressureModel tangential();
  static PressureModel powerlaw(double c, double alpha);
  static PressureModel custom(std::function<double(Vec2)> f, bool radial, std::string name = "custom");

  /// Parses "newton", "tangential" or "powerlaw:c=1,alpha=2".
  static PressureModel parse(std::string_view spec);

  /// f(gradient). Throws ValidationError for a non-finite gradient.
  double operator()(Vec2 gradient) const;

  /// f at any gradient of the given modulus. Radial models only.
  double of_modulus(double modulus) const;

  PressureKind kind() const { return kind_; }
  bool radial() const { return radial_; }
  GrowthCondition growth_condition() const;
  double powerlaw_c() const { return c_; }
  double powerlaw_alpha() const { return alpha_; }
  /// Spec string accepted by parse(), or the custom name.
  std::string spec() const;

 private:
  PressureModel() = default;

  PressureKind kind_ = PressureKind::newton;
  bool radial_ = true;
  double c_ = 1.0;
  double alpha_ = 2.0;
  std::function<double(Vec2)> custom_;
  std::string name_;
};

inline double evaluate_pressure(const PressureModel &model, Vec2 gradient) { return model(gradient); }

enum class GrowthVerdict { unbounded_growth, bounded };

const char *to_string(GrowthVerdict v);

struct GrowthRow {
  double delta = 0.0;
  double inf_ratio = 0.0;
};

struct GrowthProbe {
  std::vector<GrowthRow> rows;
  GrowthVerdict verdict = GrowthVerdict::bounded;
};

/// Sampling classifier for the growth condition. For each delta it draws
/// pairs (x, y) with (1+|x|)/|y| = delta, 1+|x| log-uniform on
/// [1, 1 + 0.9/delta] and independent uniform directions, and records the
/// smallest ratio (1+|x|) f(x) / (|y| f(y)). The verdict is unbounded_growth
/// when some pair of rows whose deltas differ by at least 100x shows the
/// ratio growing by at least 10x.
///
/// This is a heuristic: a limit statement cannot be decided from samples.
GrowthProbe growth_probe(const PressureModel &model, std::span<const double> deltas,
                                  std::size_t samples_per_delta, std::uint64_t seed);

}  // namespace leastres
