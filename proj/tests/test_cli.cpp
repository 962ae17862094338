#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "rnlw/criteria.hpp"
#include "rnlw/errors.hpp"
#include "rnlw/trajectory_io.hpp"

using namespace rnlw;
using namespace rnlw::cli;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = "scenario: unforced\noutput_dir: out\n";

std::string error_of(const std::string& yaml, const std::vector<std::string>& ov = {}) {
  try {
    parse_config(yaml, ov);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch() {
  static const fs::path p = fs::temp_directory_path() / ("rnlw_cli_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

std::string tool() {
  const char* t = std::getenv("RNLW_TOOL");
  return t ? t : "";
}

int run(const std::string& args) {
  const std::string cmd = tool() + " " + args + " >" + (scratch() / "stdout.txt").string() + " 2>" + (scratch() / "stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& body) {
  const auto p = scratch() / name;
  std::ofstream(p) << body;
  return p;
}

const char* kSmallEvolve =
    "scenario: unforced\n"
    "output_dir: unused\n"
    "grid: {radius: 16, points: 1024}\n"
    "solver: {cfl: 0.25, horizon: 1, report_stride: 8}\n";

}  // namespace

TEST_CASE("FNV-1a reference vectors") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("minimal config takes the scenario defaults") {
  const auto c = parse_config(kMinimal);
  CHECK(c.scenario.name == "unforced");
  CHECK(c.scenario.radius == 64.0);
  CHECK(c.scenario.points == 8192);
  CHECK(c.scenario.solver.cfl == 0.25);
  CHECK(c.output_dir == "out");
  CHECK(c.verify_criteria == verify_criteria());
  CHECK(c.mc_norms.size() == 1);
  CHECK(c.delta_claims.size() == 2);
}

TEST_CASE("keys, overrides and infinities") {
  const auto c = parse_config(
      "scenario: forced\noutput_dir: o\nseed: 7\n"
      "grid: {radius: 32, points: 4096}\n"
      "solver: {cfl: 0.125, horizon: 3}\n"
      "norms: {p_set: [2, inf]}\n"
      "mc:\n  trials: 200\n  side: two_sided\n  norms:\n    - {q: inf, p: 6, alpha: 0}\n",
      {"solver.horizon=5", "data.amplitude=2.5", "mc.gamma=0.5"});
  CHECK(c.seed == 7);
  CHECK(c.scenario.seed == 7);
  CHECK(c.scenario.radius == 32.0);
  CHECK(c.scenario.solver.horizon == 5.0);
  CHECK(c.scenario.amplitude == 2.5);
  CHECK(std::isinf(c.norms.p_set[1]));
  CHECK(c.mc.trials == 200);
  CHECK(c.mc.side == Side::TwoSided);
  CHECK(c.mc.gamma == 0.5);
  REQUIRE(c.mc_norms.size() == 1);
  CHECK(std::isinf(c.mc_norms[0].q));
  CHECK(c.mc_norms[0].p == 6.0);
}

TEST_CASE("config errors name the key and line") {
  CHECK(error_of("output_dir: x\n").find("'scenario'") != std::string::npos);
  CHECK(error_of("scenario: unforced\n").find("'output_dir'") != std::string::npos);
  const auto e = error_of("scenario: unforced\noutput_dir: x\ngrid:\n  radius: 3\n  pionts: 5\n");
  CHECK(e.find("grid.pionts") != std::string::npos);
  CHECK(e.find("line 5") != std::string::npos);
  CHECK(error_of("scenario: bogus\noutput_dir: x\n").find("bogus") != std::string::npos);
  CHECK(error_of("scenario: unforced\noutput_dir: x\ngrid: {radius: abc}\n").find("grid.radius") != std::string::npos);
  CHECK(error_of("scenario: unforced\noutput_dir: x\nmc: {side: sideways}\n").find("mc.side") != std::string::npos);
  CHECK(error_of("scenario: unforced\noutput_dir: x\nverify: {criteria: [14]}\n").find("criterion 14") != std::string::npos);
  CHECK(error_of(kMinimal, {"nokeyvalue"}).find("key=value") != std::string::npos);
  CHECK(error_of(kMinimal, {"extra.thing=1"}).find("override") != std::string::npos);
  CHECK(error_of("scenario: [unclosed\n").find("line") != std::string::npos);
  CHECK_THROWS_AS(load_config((scratch() / "missing.yaml").string()), ConfigError);
}

TEST_CASE("canonical config hash") {
  const auto a = parse_config(kMinimal), b = parse_config("output_dir: elsewhere\nscenario: unforced\n");
  // key order and output location do not matter
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  const auto c = parse_config(kMinimal, {"seed=2"});
  CHECK(c.hash() != a.hash());
  CHECK(a.to_json()["scenario"] == "unforced");
  CHECK(!a.to_json().contains("output_dir"));
}

TEST_CASE("container round trip") {
  io::Container c;
  c.header = R"({"radius":4.0,"points":16})";
  c.records.push_back({"DATA", 0.0, std::vector<double>(15, 1.5), std::vector<double>(15, -2.0)});
  c.records.push_back({"SNAP", 0.25, std::vector<double>(15, 0.1), std::vector<double>(15, 0.2)});
  const auto bytes = io::serialize(c);
  CHECK(bytes.substr(0, 8) == "RNLWDATA");
  const auto d = io::deserialize(bytes);
  CHECK(d.header == c.header);
  REQUIRE(d.records.size() == 2);
  CHECK(d.records[1].tag == "SNAP");
  CHECK(d.records[1].time == 0.25);
  CHECK(d.records[0].velocity == c.records[0].velocity);
  CHECK(io::grid_of(d) == RadialGrid(4.0, 16));
  CHECK(io::has_tag(d, "DATA"));
  CHECK_FALSE(io::has_tag(d, "FORC"));
  CHECK(io::unpack_data(d).position.values[3] == 1.5);
  CHECK_THROWS(io::deserialize("NOTRNLW!" + bytes.substr(8)));
  CHECK_THROWS(io::deserialize(bytes.substr(0, bytes.size() - 3)));

  const auto path = (scratch() / "c.rnlw").string();
  io::atomic_write(path, bytes);
  CHECK(io::read_file(path) == bytes);
  for (const auto& e : fs::directory_iterator(scratch())) CHECK(e.path().string().find(".tmp") == std::string::npos);
}

TEST_CASE("csv is full precision") {
  const auto s = io::csv({"a", "b"}, {{0.1, 1.0 / 3.0}});
  CHECK(s == "a,b\n0.10000000000000001,0.33333333333333331\n");
}

TEST_CASE("tool: evolve is byte-identical across reruns") {
  REQUIRE(!tool().empty());
  const auto cfg = write_config("evolve.yaml", kSmallEvolve);
  const auto a = scratch() / "ev_a", b = scratch() / "ev_b";
  REQUIRE(run("evolve -c " + cfg.string() + " -o " + a.string()) == 0);
  REQUIRE(run("evolve -c " + cfg.string() + " -o " + b.string()) == 0);
  for (const char* f : {"trajectory.rnlw", "energy.csv", "evolve.json", "manifest.json"})
    CHECK(slurp(a / f) == slurp(b / f));
  CHECK(fs::exists(a / "timestamps.json"));

  // provenance in every output
  const auto rep = nlohmann::json::parse(slurp(a / "evolve.json"));
  const auto hash = rep["provenance"]["config_hash"].get<std::string>();
  CHECK(rep["provenance"]["version"] == RNLW_VERSION);
  CHECK(slurp(a / "energy.csv").rfind("# rnlw " RNLW_VERSION " config " + hash, 0) == 0);
  const auto traj = io::deserialize(slurp(a / "trajectory.rnlw"));
  CHECK(nlohmann::json::parse(traj.header)["provenance"]["config_hash"] == hash);

  // the manifest hashes what is on disk
  const auto man = nlohmann::json::parse(slurp(a / "manifest.json"));
  for (const auto& f : man["files"]) {
    const auto bytes = slurp(a / f["name"].get<std::string>());
    CHECK(f["bytes"] == bytes.size());
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
    CHECK(f["fnv1a"] == std::string(hex));
  }

  // functionals reads the container back
  const auto fn = scratch() / "fn";
  CHECK(run("functionals -c " + cfg.string() + " -o " + fn.string() + " -s input=" + (a / "trajectory.rnlw").string()) == 0);
  const auto fj = nlohmann::json::parse(slurp(fn / "functionals.json"));
  CHECK(fj["residuals"]["energy_drift"].get<double>() < 1e-5);
}

TEST_CASE("tool: refusals and exit codes") {
  REQUIRE(!tool().empty());
  const auto cfg = write_config("evolve2.yaml", kSmallEvolve);
  const auto bad = scratch() / "bad_cfl";
  CHECK(run("evolve -c " + cfg.string() + " -o " + bad.string() + " -s solver.cfl=0.9") == 2);
  CHECK(slurp(scratch() / "stderr.txt").find("SolverParamError") != std::string::npos);
  CHECK_FALSE(fs::exists(bad / "trajectory.rnlw"));

  CHECK(run("mc -c " + cfg.string() + " -s mc.trials=10") == 2);
  CHECK(slurp(scratch() / "stderr.txt").find("InsufficientTrials") != std::string::npos);

  const auto missing = write_config("missing.yaml", "output_dir: x\n");
  CHECK(run("verify -c " + missing.string()) == 2);
  CHECK(slurp(scratch() / "stderr.txt").find("'scenario'") != std::string::npos);

  CHECK(run("evolve") == 2);               // --config is required
  CHECK(run("frobnicate -c x.yaml") == 2);  // unknown subcommand

  // a run that aborts mid-way is a failure, not a config error
  const auto edge = scratch() / "edge";
  CHECK(run("evolve -c " + cfg.string() + " -o " + edge.string() + " -s grid.radius=2 -s grid.points=256") == 1);
  CHECK(slurp(scratch() / "stderr.txt").find("DomainOverflow") != std::string::npos);
}

TEST_CASE("tool: verify exit status follows the criteria") {
  REQUIRE(!tool().empty());
  const auto cfg = write_config("verify.yaml", "scenario: unforced\noutput_dir: v\nverify: {criteria: [1, 3]}\n");
  const auto out = scratch() / "verify";
  CHECK(run("verify -c " + cfg.string() + " -o " + out.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(out / "verify.json"));
  CHECK(j["pass"] == true);
  CHECK(j["criteria"].size() == 2);
  CHECK(slurp(scratch() / "stdout.txt").find("[PASS]  1") != std::string::npos);
}

TEST_CASE("tool: randomize with two shell partitions of the same data") {
  REQUIRE(!tool().empty());
  const auto cfg = write_config("rand.yaml",
                                "scenario: forced\noutput_dir: r\ngrid: {radius: 64, points: 4096}\n"
                                "randomization: {shell_max: 400}\n");
  const auto a = scratch() / "r1", b = scratch() / "r2";
  REQUIRE(run("randomize -c " + cfg.string() + " -o " + a.string()) == 0);
  REQUIRE(run("randomize -c " + cfg.string() + " -o " + b.string() + " -s randomization.gamma=0.5") == 0);
  const auto ja = nlohmann::json::parse(slurp(a / "randomize.json")), jb = nlohmann::json::parse(slurp(b / "randomize.json"));
  CHECK(ja["shells"].size() != jb["shells"].size());
  CHECK(ja["expected_f_omega_l2_squared"].get<double>() == doctest::Approx(jb["expected_f_omega_l2_squared"].get<double>()).epsilon(1e-14));
  // per-shell pieces add back to the total
  double s = 0.0;
  for (const auto& sh : ja["shells"]) s += std::pow(sh["f_l2"].get<double>(), 2);
  CHECK(s == doctest::Approx(ja["f_l2_squared"].get<double>()).epsilon(1e-12));
  CHECK(io::has_tag(io::deserialize(slurp(a / "randomized.rnlw")), "DATA"));
}

TEST_CASE("tool: decompose closes against the propagator") {
  REQUIRE(!tool().empty());
  const auto cfg = write_config("dec.yaml", kSmallEvolve);
  const auto out = scratch() / "dec";
  REQUIRE(run("decompose -c " + cfg.string() + " -o " + out.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(out / "decompose.json"));
  for (const auto& c : j["closure"]) CHECK(c["relative_sup_error"].get<double>() < 1e-10);
  CHECK(fs::exists(out / "profiles.csv"));
  CHECK(fs::exists(out / "gradient_profiles.csv"));
}

TEST_CASE("cleanup") { fs::remove_all(scratch()); }
