/// @file test_io_cli.cpp
/// @brief Snapshot round trips, config parsing/validation/hashing, report
///        shapes, and CLI smoke tests (binary located via $NSLAB_CLI).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "nslab/io.hpp"

using namespace nslab;
namespace fs = std::filesystem;

namespace {

std::string temp_dir() {
  static std::string dir = [] {
    std::string d = (fs::temp_directory_path() / "nslab_test").string();
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const char* bin = std::getenv("NSLAB_CLI");
  REQUIRE(bin != nullptr);
  std::string cmd = std::string(bin) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  char buf[512];
  while (fgets(buf, sizeof(buf), pipe)) res.output += buf;
  int status = pclose(pipe);
  res.exit_code = WEXITSTATUS(status);
  return res;
}

}  // namespace

TEST_CASE("snapshot round trip: scalar field and vector stack, bit exact") {
  GridSpec g{8.0, 16};
  ScalarField f = sample_scalar(g, [](Vec3 x) { return x.x * x.y + 0.25; });
  std::string base = temp_dir() + "/field";
  write_snapshot(base, f, "probe");
  ScalarField back = read_snapshot_field<1>(base);
  CHECK(back.grid() == g);
  for (std::size_t i = 0; i < f.raw().size(); ++i)
    CHECK(back.raw()[i] == f.raw()[i]);

  TimeGrid tg{0.0, 1.0, 4};
  VectorStack st(tg, g);
  for (int m = 0; m < tg.nodes(); ++m)
    st.frames[m] = sample_vector(g, [&](Vec3 x) {
      return Vec3{x.x + m, x.y - m, 0.5 * m};
    });
  std::string base2 = temp_dir() + "/stack";
  write_snapshot(base2, st, "stack");
  VectorStack back2 = read_snapshot_stack<3>(base2);
  CHECK(back2.time == tg);
  for (int m = 0; m < tg.nodes(); ++m)
    for (std::size_t i = 0; i < st.frames[m].raw().size(); ++i)
      CHECK(back2.frames[m].raw()[i] == st.frames[m].raw()[i]);
}

TEST_CASE("config: TOML subset and JSON parse to the same hash") {
  std::string toml = R"(
# experiment
[grid]
n = 32
box_side = 8.0
[flow]
kind = "serrin"
amplitude = 0.01
[scan]
amplitudes = [0.1, 0.2]
)";
  std::string json = R"({
    "grid": {"n": 32, "box_side": 8.0},
    "flow": {"kind": "serrin", "amplitude": 0.01},
    "scan": {"amplitudes": [0.1, 0.2]}
  })";
  ExperimentConfig a = load_config(toml);
  ExperimentConfig b = load_config(json);
  CHECK(a.grid_n == 32);
  CHECK(a.amplitude == 0.01);
  CHECK(a.scan_amplitudes == std::vector<double>{0.1, 0.2});
  CHECK(config_hash(a) == config_hash(b));
  // determinism
  CHECK(config_hash(a) == config_hash(load_config(toml)));
}

TEST_CASE("config: unknown keys are rejected with their path") {
  CHECK_THROWS_WITH_AS(load_config("[grid]\nm = 3\n"),
                       doctest::Contains("grid.m"), IoError);
  CHECK_THROWS_WITH_AS(load_config("[nonsense]\na = 1\n"),
                       doctest::Contains("nonsense"), IoError);
  CHECK_THROWS_AS(load_config("[flow]\nkind = \"vortex\"\n"), IoError);
  CHECK_THROWS_AS(load_config("[grid]\nn = 7\n"), GridError);
}

TEST_CASE("report serializers produce the documented shapes") {
  RearrangementProfile prof;
  prof.magnitude = {2.0, 1.0};
  prof.volume = {0.5, 1.0};
  prof.cell_volume = 0.5;
  prof.total_volume = 1.0;
  std::string csv = rearrangement_csv(prof);
  CHECK(csv.find("k,volume,magnitude") == 0);

  LorentzNormResult lr;
  lr.q = 3.0;
  lr.r = kInf;
  lr.value = 1.5;
  Json nj = norm_report_json(lr, "B2");
  CHECK(nj["q"] == 3.0);
  CHECK(nj["r"] == "inf");
  CHECK(nj["mask"] == "B2");

  BootstrapSchedule sch = bootstrap_schedule(rat(9), rat(9));
  Json bj = bootstrap_json(sch);
  CHECK(bj["K"] == 8);
  CHECK(bj["sigma"] == "1/12");
  CHECK(bj["p"][8] == "inf");

  PicardTrace tr;
  tr.norms = {1.0, 1.1};
  tr.increments = {1.0, 0.1};
  tr.ratios = {0.1};
  tr.verdict = PicardVerdict::converged;
  std::string tcsv = picard_trace_csv(tr);
  CHECK(tcsv.find("iter,norm,increment,ratio") == 0);
}

TEST_CASE("atomic write leaves no temp files behind") {
  std::string p = temp_dir() + "/atomic.json";
  atomic_write(p, std::string("{}\n"));
  CHECK(fs::exists(p));
  CHECK_FALSE(fs::exists(p + ".tmp"));
}

TEST_CASE("cli: ledger bootstrap prints the frozen (9,9) schedule") {
  CliResult r = run_cli("--out " + temp_dir() + " ledger bootstrap --q 9 --s 9");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("K = 8") != std::string::npos);
  CHECK(r.output.find("12/7") != std::string::npos);
  CHECK(r.output.find("inf") != std::string::npos);
}

TEST_CASE("cli: classify and mcond verbs") {
  CliResult r = run_cli("--out " + temp_dir() + " ledger classify --q 3 --s inf");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("critical") != std::string::npos);
  CliResult r2 = run_cli("--out " + temp_dir() + " ledger mcond --q 4 --m 2");
  CHECK(r2.exit_code == 0);
  CHECK(r2.output.find("4/3") != std::string::npos);
}

TEST_CASE("cli: malformed config exits with code 2 and a schema path") {
  std::string cfgpath = temp_dir() + "/bad.toml";
  {
    std::ofstream os(cfgpath);
    os << "[grid]\nbogus = 1\n";
  }
  CliResult r = run_cli("--config " + cfgpath + " norms");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("grid.bogus") != std::string::npos);
}

TEST_CASE("cli: small picard run converges with exit code 0") {
  std::string cfgpath = temp_dir() + "/small.toml";
  {
    std::ofstream os(cfgpath);
    os << "[grid]\nn = 16\n[time]\nsteps = 8\n"
       << "[flow]\nkind = \"serrin\"\namplitude = 0.01\n";
  }
  CliResult r = run_cli("--config " + cfgpath + " --out " + temp_dir() +
                        " picard run");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("converged") != std::string::npos);
  CHECK(fs::exists(temp_dir() + "/picard_trace.csv"));
}

TEST_CASE("cli: kernel check passes") {
  CliResult r = run_cli("--out " + temp_dir() + " kernel check --samples 6");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("pass") != std::string::npos);
}
