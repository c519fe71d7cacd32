#include "leastres/cli.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "leastres/error.hpp"
#include "leastres/io.hpp"

namespace leastres {

namespace {

using io::Json;

constexpr int kDefaultFlattenExponent = 20;

bool csv_by_default(const std::string &sub) {
  return sub == "diagnose" || sub == "radial" || sub == "check-pressure";
}

Domain load_domain(const RunConfig &c) {
  if (c.domain_path.empty()) throw ValidationError("--domain is required for " + c.subcommand);
  return io::domain_from_json(io::read_json(c.domain_path));
}

ConcaveRoof load_roof(const RunConfig &c) {
  if (c.roof_path.empty()) throw ValidationError("--roof is required for " + c.subcommand);
  return io::roof_from_json(io::read_json(c.roof_path));
}

SupportProbe load_probe(const RunConfig &c, const Domain &domain) {
  if (c.probe_path.empty()) throw ValidationError("--probe is required for " + c.subcommand);
  return io::probe_from_json(io::read_json(c.probe_path), domain);
}

double require_k(const RunConfig &c) {
  if (!c.k) throw ValidationError("--k is required for " + c.subcommand);
  return *c.k;
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

std::string run_eval(const RunConfig &c, bool csv) {
  const Domain domain = load_domain(c);
  const ConcaveRoof roof = load_roof(c);
  const auto model = PressureModel::parse(c.pressure);
  if (!is_feasible(roof, domain)) throw ValidationError("roof: negative somewhere on the domain");
  const auto cells = cell_decomposition(roof, domain);
  std::ostringstream s;
  if (csv) {
    io::write_cells_csv(s, roof, cells, model);
    return s.str();
  }
  double total = 0.0;
  for (const auto &cell : cells.cells) total += cell.region.area() * model(roof.plane(cell.plane_index).g);
  const SegmentMax top = boundary_max(roof, domain);
  return dump({{"resistance", total},
               {"cells", cells.cells.size()},
               {"area", domain.area()},
               {"boundary_max", top.value},
               {"pressure", model.spec()}});
}

std::string run_truncate(const RunConfig &c, bool csv) {
  const Domain domain = load_domain(c);
  const ConcaveRoof roof = load_roof(c);
  const SupportProbe probe = load_probe(c, domain);
  const auto model = PressureModel::parse(c.pressure);
  if (csv) {
    // k-sweep table over --k-schedule (or the single --k).
    std::vector<double> ks = c.k_schedule;
    if (ks.empty()) ks.push_back(require_k(c));
    std::vector<io::KSweepRow> rows;
    for (double k : ks) {
      const auto om = omega_k(roof, probe, k, domain);
      rows.push_back({k, om ? om->area() : 0.0, resistance_delta(roof, probe, k, domain, model)});
    }
    std::ostringstream s;
    io::write_k_sweep_csv(s, rows);
    return s.str();
  }
  const double k = require_k(c);
  const auto om = omega_k(roof, probe, k, domain);
  return dump({{"k", k},
               {"area_omega_k", om ? om->area() : 0.0},
               {"delta_F", resistance_delta(roof, probe, k, domain, model)},
               {"roof", io::to_json(truncate(roof, probe, k))}});
}

std::string run_flatten(const RunConfig &c, bool csv) {
  if (csv) throw ValidationError("flatten writes json only");
  const Domain domain = load_domain(c);
  const ConcaveRoof roof = load_roof(c);
  const SupportProbe probe = load_probe(c, domain);
  const auto model = PressureModel::parse(c.pressure);
  const std::vector<double> ks = c.k_schedule.empty() ? geometric_schedule(kDefaultFlattenExponent) : c.k_schedule;
  const auto hit = flatten_search(roof, probe, domain, model, ks);
  if (!hit) return dump({{"found", false}, {"schedule_size", ks.size()}});
  return dump({{"found", true},
               {"k", hit->k},
               {"delta_F", hit->delta_f},
               {"area_omega_k", hit->omega ? hit->omega->area() : 0.0},
               {"roof", io::to_json(hit->truncated)}});
}

std::string run_diagnose(const RunConfig &c, bool csv) {
  const Domain domain = load_domain(c);
  const ConcaveRoof roof = load_roof(c);
  const SupportProbe probe = load_probe(c, domain);
  const auto model = PressureModel::parse(c.pressure);
  std::vector<double> ks = c.k_schedule;
  if (ks.empty()) ks.push_back(require_k(c));
  const auto frames = diagnostics_sweep(roof, probe, domain, model, ks);
  std::ostringstream s;
  if (csv) {
    io::write_frames_csv(s, frames);
    return s.str();
  }
  Json rows = Json::array();
  for (const auto &f : frames) {
    rows.push_back({{"k", f.k},
                    {"z0", f.z0},
                    {"alpha_k", f.alpha_k},
                    {"beta_k", f.beta_k},
                    {"chord_lower", f.chord_lower},
                    {"chord_upper", f.chord_upper},
                    {"theta_k", f.theta_k},
                    {"omega_k_area", f.omega_k_area},
                    {"ur1", f.ur1},
                    {"ur2", f.ur2},
                    {"area_ratio", f.area_ratio},
                    {"area_ratio_bound", f.area_ratio_bound},
                    {"hk1", f.hk1},
                    {"hk2", f.hk2},
                    {"infinf_bound", f.infinf_bound},
                    {"normalized_gain", f.normalized_gain},
                    {"degenerate", f.degenerate},
                    {"tilde_inside_omega", f.tilde_inside_omega}});
  }
  return dump({{"probe", io::to_json(frames.empty() ? probe : frames.front().probe)}, {"frames", rows}});
}

std::string run_radial(const RunConfig &c, bool csv) {
  const auto model = PressureModel::parse(c.pressure);
  const RadialResult r = radial_solve(c.radius, c.height, model, c.grid.value_or(64), c.budget.value_or(400), c.seed);
  std::ostringstream s;
  if (csv) {
    io::write_profile_csv(s, r.profile);
    return s.str();
  }
  return dump({{"radius", c.radius},
               {"height_cap", c.height},
               {"resistance", r.resistance},
               {"sweeps", r.sweeps},
               {"seed", c.seed},
               {"heights", r.profile.heights}});
}

std::string run_solve(const RunConfig &c, bool csv) {
  if (csv) throw ValidationError("solve writes json only");
  const Domain domain = load_domain(c);
  const auto model = PressureModel::parse(c.pressure);
  SolveOptions options;
  options.seed = c.seed;
  if (c.planes) options.plane_budget = *c.planes;
  if (c.budget) options.iterations = *c.budget;
  if (c.grid) options.radial_grid = *c.grid;
  const SolveReport report = solve_roof(domain, model, c.height, options);
  return dump(io::solve_report_json(report, options, model, c.height));
}

std::string run_check_pressure(const RunConfig &c, bool csv) {
  const auto model = PressureModel::parse(c.pressure);
  const std::vector<double> deltas = c.k_schedule.empty() ? std::vector<double>{1e-2, 1e-3, 1e-4, 1e-5} : c.k_schedule;
  const int samples = c.samples.value_or(2000);
  if (samples < 1) throw ValidationError("--samples must be positive");
  const auto probe = growth_probe(model, deltas, static_cast<std::size_t>(samples), c.seed);
  std::ostringstream s;
  if (csv) {
    io::write_growth_csv(s, probe);
    return s.str();
  }
  const char *known = model.growth_condition() == GrowthCondition::holds    ? "holds"
                      : model.growth_condition() == GrowthCondition::fails ? "fails"
                                                                 : "unknown";
  Json rows = Json::array();
  for (const auto &row : probe.rows) rows.push_back({{"delta", row.delta}, {"inf_ratio", row.inf_ratio}});
  return dump({{"pressure", model.spec()}, {"verdict", to_string(probe.verdict)}, {"analytic", known}, {"rows", rows}});
}

}  // namespace

int run_command(const RunConfig &config, std::ostream &out, std::ostream &log) {
  log << "leastres " << kVersion << " " << config.subcommand << " seed=" << config.seed << "\n";
  try {
    const std::string format = config.format.empty() ? (csv_by_default(config.subcommand) ? "csv" : "json")
                                                     : config.format;
    if (format != "json" && format != "csv") throw ValidationError("--format must be json or csv");
    const bool csv = format == "csv";
    std::string text;
    const std::string &sub = config.subcommand;
    if (sub == "eval") {
      text = run_eval(config, csv);
    } else if (sub == "truncate") {
      text = run_truncate(config, csv);
    } else if (sub == "flatten") {
      text = run_flatten(config, csv);
    } else if (sub == "diagnose") {
      text = run_diagnose(config, csv);
    } else if (sub == "radial") {
      text = run_radial(config, csv);
    } else if (sub == "solve") {
      text = run_solve(config, csv);
    } else if (sub == "check-pressure") {
      text = run_check_pressure(config, csv);
    } else {
      throw ValidationError("unknown subcommand '" + sub + "'");
    }
    if (config.out_path.empty()) {
      out << text;
    } else {
      io::write_text(config.out_path, text);
    }
    return 0;
  } catch (const ValidationError &e) {
    log << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    log << "failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace leastres
