#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "chns_cli_test";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& json) {
  fs::create_directories(kRoot);
  const fs::path p = kRoot / (name + ".json");
  std::ofstream(p) << json;
  return p;
}

// Runs the CLI and returns its exit status; stderr goes to `err_file`.
int run(const std::string& args, const fs::path& err_file = kRoot / "stderr.txt") {
  const std::string cmd = std::string(CHNS_CLI_PATH) + " " + args + " > /dev/null 2> " + err_file.string();
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

const char* kSpinodal = R"({"grid": {"nx": 16, "ny": 16}, "time": {"dt": 0.002, "t_end": 0.05, "snapshot_every": 10},
  "init": {"kind": "spinodal", "amplitude": 0.2, "seed": 2}})";

}  // namespace

TEST_CASE("exit codes") {
  fs::remove_all(kRoot);
  const auto rest = write_config("rest", R"({"grid": {"nx": 8, "ny": 8}, "time": {"dt": 0.01, "t_end": 0.05}})");
  CHECK(run("simulate --config " + rest.string() + " --out " + (kRoot / "rest").string()) == 0);
  CHECK(fs::exists(kRoot / "rest" / "diagnostics.csv"));

  const auto zero_dt = write_config("dt0", R"({"time": {"dt": 0}})");
  CHECK(run("simulate --config " + zero_dt.string()) == 1);
  CHECK(slurp(kRoot / "stderr.txt").find("time.dt must be > 0") != std::string::npos);

  CHECK(run("simulate") == 1);
  CHECK(run("--config " + rest.string()) == 1);
  CHECK(run("simulate --config " + (kRoot / "missing.json").string()) == 1);
  CHECK(run("audit nonsense --config " + rest.string() + " --out " + (kRoot / "x").string()) == 1);

  const auto blow = write_config("blow", R"({"grid": {"nx": 16, "ny": 16}, "time": {"t_end": 0.01},
    "init": {"kind": "spinodal", "amplitude": 0.5}, "scheme": {"blowup_cap": 0.001}})");
  CHECK(run("simulate --config " + blow.string() + " --out " + (kRoot / "blow").string()) == 2);

  const auto coarse = write_config("coarse", R"({"grid": {"nx": 16, "ny": 16}, "time": {"dt": 0.02, "t_end": 0.4},
    "init": {"kind": "spinodal", "amplitude": 0.3, "kmax": 4}})");
  CHECK(run("audit energy --config " + coarse.string() + " --out " + (kRoot / "coarse").string()) == 3);
  CHECK(run("audit mass --config " + coarse.string() + " --out " + (kRoot / "coarse").string()) == 0);
}

TEST_CASE("byte-identical reruns, including from the manifest") {
  const auto cfg = write_config("spin", kSpinodal);
  const fs::path a = kRoot / "run_a", b = kRoot / "run_b", c = kRoot / "run_c";
  REQUIRE(run("simulate --config " + cfg.string() + " --out " + a.string()) == 0);
  REQUIRE(run("simulate --config " + cfg.string() + " --out " + b.string()) == 0);
  REQUIRE(run("simulate --config " + (a / "manifest.json").string() + " --out " + c.string()) == 0);
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), a);
    CHECK(slurp(entry.path()) == slurp(b / rel));
    CHECK(slurp(entry.path()) == slurp(c / rel));
  }
  CHECK(fs::exists(a / "snapshots" / "state_000003.chns"));
  CHECK_FALSE(fs::exists(a / "diagnostics.csv.tmp"));
}

TEST_CASE("seed override") {
  const auto cfg = write_config("spin", kSpinodal);
  REQUIRE(run("simulate --config " + cfg.string() + " --out " + (kRoot / "s1").string()) == 0);
  REQUIRE(run("simulate --config " + cfg.string() + " --seed 77 --out " + (kRoot / "s2").string()) == 0);
  CHECK(slurp(kRoot / "s1" / "diagnostics.csv") != slurp(kRoot / "s2" / "diagnostics.csv"));
  CHECK(slurp(kRoot / "s2" / "manifest.json").find("\"seed\": 77") != std::string::npos);
}

TEST_CASE("optimize, hjb-check and dpp-check") {
  const auto r0 = write_config("r0", R"({"grid": {"nx": 8, "ny": 8}, "params": {"R": 0}, "time": {"dt": 0.01, "t_end": 0.05}})");
  REQUIRE(run("optimize --config " + r0.string() + " --out " + (kRoot / "opt").string()) == 0);
  CHECK(slurp(kRoot / "opt" / "value.json").find("\"value\": 0.0,") != std::string::npos);

  REQUIRE(run("hjb-check --config " + r0.string() + " --out " + (kRoot / "hjb").string()) == 0);
  const std::string table = slurp(kRoot / "hjb" / "hamiltonian.csv");
  CHECK(std::count(table.begin(), table.end(), '\n') == 5);

  const auto small = write_config("dpp", R"({"grid": {"nx": 8, "ny": 8}, "time": {"dt": 0.005, "t_end": 0.05},
    "init": {"kind": "spinodal", "amplitude": 0.3, "kmax": 2},
    "optimizer": {"population": 8, "elites": 2, "iterations": 3, "fd_passes": 1, "intervals": 2}})");
  CHECK(run("dpp-check --t-mid 0.025 --config " + small.string() + " --out " + (kRoot / "dpp").string()) == 0);
  CHECK(slurp(kRoot / "dpp" / "dpp.json").find("\"t_mid\": 0.025") != std::string::npos);
  CHECK(run("dpp-check --t-mid 0.5 --config " + small.string() + " --out " + (kRoot / "dpp2").string()) == 1);

  // A stored control replays through simulate.
  const std::string replay = R"({"grid": {"nx": 8, "ny": 8}, "time": {"dt": 0.005, "t_end": 0.05},
    "init": {"kind": "spinodal", "amplitude": 0.3, "kmax": 2}, "control": {"kind": "file", "path": ")" +
                             (kRoot / "opt2" / "value.json").string() + R"("},
    "optimizer": {"population": 8, "elites": 2, "iterations": 3, "fd_passes": 1, "intervals": 2}})";
  const auto rp = write_config("replay", replay);
  REQUIRE(run("optimize --config " + small.string() + " --out " + (kRoot / "opt2").string()) == 0);
  CHECK(run("simulate --config " + rp.string() + " --out " + (kRoot / "replay").string()) == 0);
}
