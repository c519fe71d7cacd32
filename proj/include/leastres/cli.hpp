#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace leastres {

inline constexpr const char *kVersion = LEASTRES_VERSION;

inline constexpr const char *kSubcommands[] = {"eval",   "truncate", "flatten",       "diagnose",
                                               "radial", "solve",    "check-pressure"};

/// Everything one CLI invocation needs. Unset optionals take the
/// subcommand's default.
struct RunConfig {
  std::string subcommand;
  std::string domain_path;
  std::string roof_path;
  std::string probe_path;
  std::string pressure = "newton";
  std::optional<double> k;
  std::vector<double> k_schedule;
  double height = 1.0;
  double radius = 1.0;
  std::optional<int> planes;
  std::optional<int> budget;
  std::uint64_t seed = 1;
  std::optional<int> grid;
  std::optional<int> samples;
  std::string out_path;  // empty: the `out` stream
  std::string format;    // "json" or "csv"; empty: per-subcommand default
};

/// Runs one subcommand. The artifact goes to config.out_path or `out`; the
/// version/seed line and any error message go to `log`.
/// Returns 0 on success, 1 for invalid input, 2 for a runtime failure.
int run_command(const RunConfig &config, std::ostream &out, std::ostream &log);

}  // namespace leastres
