#include "leastres/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "leastres/error.hpp"

namespace leastres::io {

namespace {

[[noreturn]] void fail(const std::string &path, const std::string &what) {
  throw ValidationError(path + ": " + what);
}

const Json &field(const Json &j, const char *key, const std::string &path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing");
  return *it;
}

double real(const Json &j, const std::string &path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Vec2 pair(const Json &j, const std::string &path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
  return {real(j[0], path + "[0]"), real(j[1], path + "[1]")};
}

Json pair_json(Vec2 v) { return Json::array({v.x, v.y}); }

// Rethrows library validation failures with the field path in front.
template <class F>
auto at_path(const std::string &path, F &&f) {
  try {
    return f();
  } catch (const ValidationError &e) {
    fail(path, e.what());
  }
}

}  // namespace

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const Domain &domain) {
  if (const auto *disc = std::get_if<DiscShape>(&domain.provenance)) {
    return {{"kind", "disc"}, {"center", pair_json(disc->center)}, {"radius", disc->radius},
            {"segments", disc->segments}};
  }
  Json vs = Json::array();
  for (const auto &v : domain.shape.vertices()) vs.push_back(pair_json(v));
  return {{"kind", "polygon"}, {"vertices", vs}};
}

Domain domain_from_json(const Json &j) {
  const Json &kind = field(j, "kind", "domain");
  if (kind == "disc") {
    const Vec2 c = pair(field(j, "center", "domain"), "domain.center");
    const double r = real(field(j, "radius", "domain"), "domain.radius");
    const Json &segs = field(j, "segments", "domain");
    if (!segs.is_number_integer()) fail("domain.segments", "expected an integer");
    return at_path("domain", [&] { return make_disc_domain(c, r, segs.get<int>()); });
  }
  if (kind == "polygon") {
    const Json &vs = field(j, "vertices", "domain");
    if (!vs.is_array()) fail("domain.vertices", "expected an array");
    std::vector<Point2> points;
    for (std::size_t i = 0; i < vs.size(); ++i) points.push_back(pair(vs[i], "domain.vertices[" + std::to_string(i) + "]"));
    return at_path("domain.vertices", [&] { return make_polygon_domain(std::move(points)); });
  }
  fail("domain.kind", "expected \"polygon\" or \"disc\"");
}

Json to_json(const ConcaveRoof &roof) {
  Json planes = Json::array();
  for (const auto &p : roof.planes()) planes.push_back({{"g", pair_json(p.g)}, {"c", p.c}});
  return {{"height_cap", roof.height_cap()}, {"planes", planes}};
}

ConcaveRoof roof_from_json(const Json &j) {
  const double cap = real(field(j, "height_cap", "roof"), "roof.height_cap");
  const Json &ps = field(j, "planes", "roof");
  if (!ps.is_array()) fail("roof.planes", "expected an array");
  std::vector<AffinePlane> planes;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string path = "roof.planes[" + std::to_string(i) + "]";
    planes.push_back({pair(field(ps[i], "g", path), path + ".g"), real(field(ps[i], "c", path), path + ".c")});
  }
  return at_path("roof", [&] { return ConcaveRoof(std::move(planes), cap); });
}

Json to_json(const SupportProbe &probe) {
  return {{"x0", pair_json(probe.x0)},
          {"n", pair_json(probe.n)},
          {"contact_lower", pair_json(probe.contact_lower)},
          {"contact_upper", pair_json(probe.contact_upper)}};
}

SupportProbe probe_from_json(const Json &j, const Domain &domain) {
  const Vec2 x0 = pair(field(j, "x0", "probe"), "probe.x0");
  const Vec2 n = pair(field(j, "n", "probe"), "probe.n");
  return at_path("probe", [&] { return make_probe(domain, x0, n); });
}

Json read_json(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string() + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error &e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot write");
  out << text;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

void write_frames_csv(std::ostream &out, std::span<const DiagnosticsFrame> frames) {
  out << "k,z0,alpha_k,beta_k,chord_lower,chord_upper,theta_k,omega_k_area,omega_k_plus_area,"
         "tilde_omega_area,ur1,ur2,area_ratio,area_ratio_bound,hk1,hk2,infinf_bound,normalized_gain,"
         "degenerate,tilde_inside_omega\n";
  for (const auto &f : frames) {
    const double plus = f.omega_k_plus ? f.omega_k_plus->area() : 0.0;
    const double tilde = f.tilde_omega ? f.tilde_omega->area() : 0.0;
    for (double v : {f.k, f.z0, f.alpha_k, f.beta_k, f.chord_lower, f.chord_upper, f.theta_k, f.omega_k_area, plus,
                     tilde, f.ur1, f.ur2, f.area_ratio, f.area_ratio_bound, f.hk1, f.hk2, f.infinf_bound,
                     f.normalized_gain}) {
      out << number(v) << ',';
    }
    out << (f.degenerate ? 1 : 0) << ',' << (f.tilde_inside_omega ? 1 : 0) << '\n';
  }
}

void write_cells_csv(std::ostream &out, const ConcaveRoof &roof, const CellDecomposition &cells,
                     const PressureModel &model) {
  out << "plane,gx,gy,c,area,pressure,contribution\n";
  for (const auto &cell : cells.cells) {
    const AffinePlane p = roof.plane(cell.plane_index);
    const double f = model(p.g);
    out << cell.plane_index << ',' << number(p.g.x) << ',' << number(p.g.y) << ',' << number(p.c) << ','
        << number(cell.region.area()) << ',' << number(f) << ',' << number(f * cell.region.area()) << '\n';
  }
}

void write_profile_csv(std::ostream &out, const RadialProfile &profile) {
  out << "r,phi\n";
  for (std::size_t i = 0; i < profile.heights.size(); ++i) {
    out << number(profile.node(i)) << ',' << number(profile.heights[i]) << '\n';
  }
}

void write_growth_csv(std::ostream &out, const GrowthProbe &probe) {
  out << "delta,inf_ratio,verdict\n";
  for (const auto &row : probe.rows) {
    out << number(row.delta) << ',' << number(row.inf_ratio) << ',' << to_string(probe.verdict) << '\n';
  }
}

void write_k_sweep_csv(std::ostream &out, std::span<const KSweepRow> rows) {
  out << "k,area_omega_k,delta_F\n";
  for (const auto &r : rows) out << number(r.k) << ',' << number(r.area_omega_k) << ',' << number(r.delta_f) << '\n';
}

Json solve_report_json(const SolveReport &report, const SolveOptions &options, const PressureModel &model,
                       double height_cap) {
  Json moves = Json::object();
  for (std::size_t k = 0; k < kMoveNames.size(); ++k) {
    moves[kMoveNames[k]] = {{"proposed", report.moves.proposed[k]}, {"accepted", report.moves.accepted[k]}};
  }
  return {{"pressure", model.spec()},
          {"height_cap", height_cap},
          {"seed", report.seed},
          {"budgets",
           {{"plane_budget", options.plane_budget},
            {"iterations", options.iterations},
            {"profile_segments", options.profile_segments},
            {"radial_grid", options.radial_grid},
            {"radial_sweeps", options.radial_sweeps},
            {"max_planes", options.max_planes}}},
          {"schedule",
           {{"initial_temperature", options.initial_temperature},
            {"cooling", options.cooling},
            {"step_scale", options.step_scale},
            {"flatten_max_exponent", options.flatten_max_exponent}}},
          {"iterations", report.iterations},
          {"initial_resistance", report.initial_resistance},
          {"radial_resistance", report.radial_resistance},
          {"resistance", report.resistance},
          {"boundary_flatness",
           {{"value", report.boundary_flatness.value}, {"point", pair_json(report.boundary_flatness.point)}}},
          {"moves", moves},
          {"roof", to_json(report.roof)}};
}

}  // namespace leastres::io
