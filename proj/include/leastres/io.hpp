#pragma once

// File formats: JSON for domains, roofs, probes and solve reports; CSV for
// tabular output. Numbers are written with 17 significant digits, so a
// write/read cycle reproduces every double exactly.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "leastres/geometry.hpp"
#include "leastres/pressure.hpp"
#include "leastres/prooflab.hpp"
#include "leastres/roof.hpp"
#include "leastres/solver.hpp"
#include "leastres/truncation.hpp"

namespace leastres::io {

using Json = nlohmann::json;

//   {"kind": "polygon", "vertices": [[x, y], ...]}
//   {"kind": "disc", "center": [x, y], "radius": R, "segments": n}
Json to_json(const Domain &domain);
Domain domain_from_json(const Json &j);

//   {"height_cap": M, "planes": [{"g": [gx, gy], "c": c}, ...]}
Json to_json(const ConcaveRoof &roof);
ConcaveRoof roof_from_json(const Json &j);

//   {"x0": [x, y], "n": [nx, ny]}; contact points are written for reference
//   and recomputed from the domain on reading.
Json to_json(const SupportProbe &probe);
SupportProbe probe_from_json(const Json &j, const Domain &domain);

/// Whole-file read; ValidationError if it cannot be opened or parsed.
Json read_json(const std::filesystem::path &path);
void write_text(const std::filesystem::path &path, const std::string &text);

/// "%.17g"
std::string number(double v);

// CSV writers. Each writes a header row.
void write_frames_csv(std::ostream &out, std::span<const DiagnosticsFrame> frames);
void write_cells_csv(std::ostream &out, const ConcaveRoof &roof, const CellDecomposition &cells,
                     const PressureModel &model);
void write_profile_csv(std::ostream &out, const RadialProfile &profile);
void write_growth_csv(std::ostream &out, const GrowthProbe &probe);

struct KSweepRow {
  double k = 0.0;
  double area_omega_k = 0.0;
  double delta_f = 0.0;
};
void write_k_sweep_csv(std::ostream &out, std::span<const KSweepRow> rows);

Json solve_report_json(const SolveReport &report, const SolveOptions &options, const PressureModel &model,
                       double height_cap);

}  // namespace leastres::io
