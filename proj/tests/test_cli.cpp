#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "leastres/cli.hpp"
#include "leastres/io.hpp"
#include "support.hpp"

using namespace leastres;
namespace fs = std::filesystem;

namespace {

const fs::path &dir() {
  static const fs::path d = [] {
    const fs::path p = fs::temp_directory_path() / "leastres_test_cli";
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string put(const std::string &name, const std::string &text) {
  const fs::path p = dir() / name;
  io::write_text(p, text);
  return p.string();
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int status;
  std::string out;
  std::string log;
};

Run run(const RunConfig &c) {
  std::ostringstream out, log;
  const int status = run_command(c, out, log);
  return {status, out.str(), log.str()};
}

RunConfig square_config(const std::string &sub) {
  RunConfig c;
  c.subcommand = sub;
  c.domain_path = put("square.json", R"({"kind": "polygon", "vertices": [[0,0],[1,0],[1,1],[0,1]]})");
  c.roof_path = put("cap.json", R"({"height_cap": 1, "planes": []})");
  c.probe_path = put("probe.json", R"({"x0": [1, 0.5], "n": [1, 0]})");
  return c;
}

}  // namespace

TEST_CASE("eval prints the resistance") {
  const Run r = run(square_config("eval"));
  REQUIRE(r.status == 0);
  CHECK(io::Json::parse(r.out)["resistance"].get<double>() == 1.0);
  CHECK(r.log.find("leastres " + std::string(kVersion)) != std::string::npos);
  CHECK(r.log.find("seed=1") != std::string::npos);
}

TEST_CASE("diagnose reproduces the frame values") {
  RunConfig c = square_config("diagnose");
  c.k_schedule = {8, 800, 1e5};
  const Run r = run(c);
  REQUIRE(r.status == 0);
  const Domain sq = leastres::testing::unit_square();
  const auto frames = diagnostics_sweep(ConcaveRoof({}, 1.0), make_probe(sq, {1, 0.5}, {1, 0}), sq,
                                        PressureModel::newton(), c.k_schedule);
  std::ostringstream expected;
  io::write_frames_csv(expected, frames);
  CHECK(r.out == expected.str());
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
  // theta_k column of the k = 800 row.
  CHECK(r.out.find("\n800,1,0,") != std::string::npos);
  CHECK(frames[1].theta_k == doctest::Approx(0.1));
}

TEST_CASE("solve with M = 0") {
  RunConfig c = square_config("solve");
  c.height = 0.0;
  const Run r = run(c);
  REQUIRE(r.status == 0);
  const auto j = io::Json::parse(r.out);
  CHECK(j["resistance"].get<double>() == 1.0);
  CHECK(j["boundary_flatness"]["value"].get<double>() == 0.0);
  CHECK(j["seed"].get<std::uint64_t>() == 1);
}

TEST_CASE("other subcommands") {
  RunConfig c = square_config("truncate");
  c.k = 2.0;
  Run r = run(c);
  REQUIRE(r.status == 0);
  CHECK(io::Json::parse(r.out)["delta_F"].get<double>() == doctest::Approx(0.4).epsilon(1e-12));

  c.format = "csv";
  c.k_schedule = {0.5, 1, 2};
  r = run(c);
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("k,area_omega_k,delta_F\n0.5,1,", 0) == 0);

  c = square_config("flatten");
  r = run(c);
  REQUIRE(r.status == 0);
  CHECK(io::Json::parse(r.out)["k"].get<double>() == 1.0);

  c = square_config("radial");
  c.grid = 16;
  r = run(c);
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("r,phi\n0,1\n", 0) == 0);

  c = square_config("check-pressure");
  c.format = "json";
  c.samples = 500;
  r = run(c);
  REQUIRE(r.status == 0);
  CHECK(io::Json::parse(r.out)["verdict"] == "unbounded-growth");
}

TEST_CASE("exit codes") {
  RunConfig c = square_config("eval");
  c.roof_path = (dir() / "absent.json").string();
  Run r = run(c);
  CHECK(r.status == 1);
  CHECK(r.log.find("absent.json") != std::string::npos);

  c = square_config("truncate");  // no --k
  CHECK(run(c).status == 1);
  c = square_config("nonsense");
  CHECK(run(c).status == 1);
  c = square_config("eval");
  c.pressure = "newtonian";
  CHECK(run(c).status == 1);
  c.pressure = "newton";
  c.roof_path = put("negative.json", R"({"height_cap": 1, "planes": [{"g": [-1, 0], "c": 0.5}]})");
  CHECK(run(c).status == 1);

  // Unwritable output: a runtime failure, not bad input.
  c = square_config("eval");
  c.out_path = (dir() / "no_such_dir" / "out.json").string();
  r = run(c);
  CHECK(r.status == 2);
}

TEST_CASE("identical config and seed give identical bytes") {
  RunConfig c = square_config("radial");
  c.height = 0.8;
  c.grid = 32;
  c.seed = 5;
  c.out_path = (dir() / "a.csv").string();
  REQUIRE(run(c).status == 0);
  c.out_path = (dir() / "b.csv").string();
  REQUIRE(run(c).status == 0);
  CHECK(slurp(dir() / "a.csv") == slurp(dir() / "b.csv"));
  CHECK(!slurp(dir() / "a.csv").empty());

  c = square_config("check-pressure");
  c.samples = 300;
  c.out_path = (dir() / "c.csv").string();
  REQUIRE(run(c).status == 0);
  c.out_path = (dir() / "d.csv").string();
  REQUIRE(run(c).status == 0);
  CHECK(slurp(dir() / "c.csv") == slurp(dir() / "d.csv"));
}

TEST_CASE("binary: flags, config file, exit codes") {
  const std::string cli = LEASTRES_CLI_PATH;
  const RunConfig c = square_config("eval");
  const std::string out = (dir() / "bin_eval.json").string();
  const auto status = [](const std::string &cmd) {
    const int raw = std::system((cmd + " 2>/dev/null").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status(cli + " eval --domain " + c.domain_path + " --roof " + c.roof_path + " --out " + out) == 0);
  CHECK(io::read_json(out)["resistance"].get<double>() == 1.0);

  // Config file values, with an explicit flag overriding one of them.
  const std::string config = put("run.toml", "domain = \"" + c.domain_path + "\"\nroof = \"" + c.roof_path +
                                                 "\"\npressure = \"newtonian\"\n");
  CHECK(status(cli + " eval --config " + config + " --out " + out) == 1);
  CHECK(status(cli + " eval --config " + config + " --pressure tangential --out " + out) == 0);
  CHECK(io::read_json(out)["resistance"].get<double>() == 1.0);

  CHECK(status(cli + " eval --domain " + c.domain_path) == 1);
  CHECK(status(cli + " frobnicate") == 1);
  CHECK(status(cli + " eval --format xml --domain " + c.domain_path) == 1);
}
