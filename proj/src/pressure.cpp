#include "leastres/pressure.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "leastres/error.hpp"
#include "leastres/random.hpp"

namespace leastres {

namespace {

double newton_law(double r) { return 1.0 / (1.0 + r * r); }

// 1 - r/sqrt(1+r^2) without cancellation at large r.
double tangential_law(double r) {
  const double s = std::sqrt(1.0 + r * r);
  return 1.0 / (s * (s + r));
}

double parse_number(std::string_view text, std::string_view field) {
  double value = 0.0;
  const auto *first = text.data();
  const auto *last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ValidationError("pressure spec: cannot parse " + std::string(field) + " = '" +
                          std::string(text) + "'");
  }
  return value;
}

}  // namespace

PressureModel PressureModel::newton() {
  PressureModel m;
  m.kind_ = PressureKind::newton;
  return m;
}

PressureModel PressureModel::tangential() {
  PressureModel m;
  m.kind_ = PressureKind::tangential;
  return m;
}

PressureModel PressureModel::powerlaw(double c, double alpha) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("powerlaw: c must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ValidationError("powerlaw: alpha must be positive");
  }
  PressureModel m;
  m.kind_ = PressureKind::powerlaw;
  m.c_ = c;
  m.alpha_ = alpha;
  return m;
}

PressureModel PressureModel::custom(std::function<double(Vec2)> f, bool radial, std::string name) {
  if (!f) throw ValidationError("custom pressure law is empty");
  // Continuity screen: four rays, |x| in [0, 10] at spacing 1e-4.
  constexpr double kSpacing = 1e-4;
  constexpr int kSteps = 100000;
  constexpr double kMaxJump = 1e-3;
  for (int ray = 0; ray < 4; ++ray) {
    const double angle = ray * std::numbers::pi / 4.0 + 0.1;
    const Vec2 dir{std::cos(angle), std::sin(angle)};
    double prev = f(Vec2{});
    if (!(prev > 0.0) || !std::isfinite(prev)) {
      throw ValidationError("custom pressure law is not positive at 0");
    }
    for (int i = 1; i <= kSteps; ++i) {
      const double v = f((i * kSpacing) * dir);
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError("custom pressure law is not positive and finite on the sample grid");
      }
      if (std::abs(v - prev) > kMaxJump * std::max(v, prev)) {
        throw ValidationError("custom pressure law has a jump on the sample grid");
      }
      prev = v;
    }
  }
  PressureModel m;
  m.kind_ = PressureKind::custom;
  m.radial_ = radial;
  m.custom_ = std::move(f);
  m.name_ = std::move(name);
  return m;
}

PressureModel PressureModel::parse(std::string_view spec) {
  if (spec == "newton") return newton();
  if (spec == "tangential") return tangential();
  constexpr std::string_view prefix = "powerlaw";
  if (spec.substr(0, prefix.size()) == prefix) {
    std::string_view rest = spec.substr(prefix.size());
    double c = 1.0;
    double alpha = std::numeric_limits<double>::quiet_NaN();
    if (!rest.empty()) {
      if (rest.front() != ':') throw ValidationError("pressure spec: expected ':' after powerlaw");
      rest.remove_prefix(1);
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
          throw ValidationError("pressure spec: expected key=value, got '" + std::string(item) + "'");
        }
        const auto key = item.substr(0, eq);
        const auto value = item.substr(eq + 1);
        if (key == "c") {
          c = parse_number(value, key);
        } else if (key == "alpha") {
          alpha = parse_number(value, key);
        } else {
          throw ValidationError("pressure spec: unknown key '" + std::string(key) + "'");
        }
      }
    }
    if (std::isnan(alpha)) throw ValidationError("pressure spec: powerlaw needs alpha");
    return powerlaw(c, alpha);
  }
  throw ValidationError("unknown pressure spec '" + std::string(spec) + "'");
}

double PressureModel::of_modulus(double r) const {
  switch (kind_) {
    case PressureKind::newton:
      return newton_law(r);
    case PressureKind::tangential:
      return tangential_law(r);
    case PressureKind::powerlaw:
      return c_ * std::pow(1.0 + r, -alpha_);
    case PressureKind::custom:
      if (!radial_) throw ValidationError("pressure law is not radial");
      return custom_(Vec2{r, 0.0});
  }
  return 0.0;
}

double PressureModel::operator()(Vec2 gradient) const {
  if (!is_finite(gradient)) throw ValidationError("pressure evaluated at a non-finite gradient");
  if (kind_ == PressureKind::custom) return custom_(gradient);
  return of_modulus(norm(gradient));
}

GrowthCondition PressureModel::growth_condition() const {
  switch (kind_) {
    case PressureKind::newton:
    case PressureKind::tangential:
      return GrowthCondition::holds;
    case PressureKind::powerlaw:
      return alpha_ > 1.0 ? GrowthCondition::holds : GrowthCondition::fails;
    case PressureKind::custom:
      return GrowthCondition::unknown;
  }
  return GrowthCondition::unknown;
}

std::string PressureModel::spec() const {
  switch (kind_) {
    case PressureKind::newton:
      return "newton";
    case PressureKind::tangential:
      return "tangential";
    case PressureKind::powerlaw: {
      std::ostringstream out;
      out.precision(17);
      out << "powerlaw:c=" << c_ << ",alpha=" << alpha_;
      return out.str();
    }
    case PressureKind::custom:
      return name_;
  }
  return {};
}

const char *to_string(GrowthVerdict v) {
  return v == GrowthVerdict::unbounded_growth ? "unbounded-growth" : "bounded";
}

GrowthProbe growth_probe(const PressureModel &model, std::span<const double> deltas,
                                  std::size_t samples_per_delta, std::uint64_t seed) {
  if (deltas.empty()) throw ValidationError("growth probe: empty delta schedule");
  if (samples_per_delta < 100) throw ValidationError("growth probe: need at least 100 samples per delta");
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    if (!(deltas[d] > 0.0 && deltas[d] < 1.0)) {
      throw ValidationError("growth probe: deltas must lie in (0, 1)");
    }
    if (d > 0 && !(deltas[d] < deltas[d - 1])) {
      throw ValidationError("growth probe: deltas must be decreasing");
    }
  }

  GrowthProbe probe;
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    const double delta = deltas[d];
    const double log_span = std::log1p(0.9 / delta);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples_per_delta; ++i) {
      const double u = counter_uniform(seed, d, i, 0);
      const double phi_x = 2.0 * std::numbers::pi * counter_uniform(seed, d, i, 1);
      const double phi_y = 2.0 * std::numbers::pi * counter_uniform(seed, d, i, 2);
      const double one_plus_rx = std::exp(u * log_span);
      const double rx = one_plus_rx - 1.0;
      const double ry = one_plus_rx / delta;
      const double fx = model(Vec2{rx * std::cos(phi_x), rx * std::sin(phi_x)});
      const double fy = model(Vec2{ry * std::cos(phi_y), ry * std::sin(phi_y)});
      if (!(fx > 0.0) || !(fy > 0.0)) {
        throw ValidationError("growth probe: pressure law is not positive");
      }
      best = std::min(best, one_plus_rx * fx / (ry * fy));
    }
    probe.rows.push_back({delta, best});
  }

  constexpr double kDeltaSpan = 100.0 * (1.0 - 1e-9);
  constexpr double kGrowth = 10.0;
  for (std::size_t i = 0; i < probe.rows.size(); ++i) {
    for (std::size_t j = i + 1; j < probe.rows.size(); ++j) {
      if (probe.rows[i].delta / probe.rows[j].delta >= kDeltaSpan &&
          probe.rows[j].inf_ratio >= kGrowth * probe.rows[i].inf_ratio) {
        probe.verdict = GrowthVerdict::unbounded_growth;
      }
    }
  }
  return probe;
}

}  // namespace leastres
