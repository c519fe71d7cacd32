// Command-line front end: flags (or a TOML/INI --config file) -> RunConfig.

#include <iostream>

#include <CLI11.hpp>

#include "leastres/cli.hpp"

int main(int argc, char **argv) {
  leastres::RunConfig config;
  CLI::App app{"Minimal-resistance toolkit over concave roofs"};
  app.set_version_flag("--version", std::string(leastres::kVersion));
  app.set_config("--config", "", "TOML/INI file with flag values; explicit flags override it");
  app.require_subcommand(1, 1);

  // Options live on the top-level app (so a config file can set them) and
  // fall through from the subcommand, so both orders work.
  app.add_option("--domain", config.domain_path, "Domain JSON");
  app.add_option("--roof", config.roof_path, "Roof JSON");
  app.add_option("--probe", config.probe_path, "Probe JSON");
  app.add_option("--pressure", config.pressure, "newton | tangential | powerlaw:c=..,alpha=..");
  app.add_option("--k", config.k, "Truncation slope");
  app.add_option("--k-schedule", config.k_schedule, "Slopes (or deltas for check-pressure)")->delimiter(',');
  app.add_option("--height", config.height, "Height cap M");
  app.add_option("--radius", config.radius, "Disc radius for radial");
  app.add_option("--planes", config.planes, "Plane budget for solve");
  app.add_option("--budget", config.budget, "Iterations (solve) or sweeps per level (radial)");
  app.add_option("--seed", config.seed, "Random seed");
  app.add_option("--grid", config.grid, "Radial grid size");
  app.add_option("--samples", config.samples, "Samples per delta for check-pressure");
  app.add_option("--out", config.out_path, "Output file (default stdout)");
  app.add_option("--format", config.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  for (const char *name : leastres::kSubcommands) {
    app.add_subcommand(name)->fallthrough()->callback([&config, name] { config.subcommand = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }
  return leastres::run_command(config, std::cout, std::cerr);
}
