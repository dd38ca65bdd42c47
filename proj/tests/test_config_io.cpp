#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <filesystem>
#include <numbers>

#include "chns/config.hpp"
#include "chns/error.hpp"
#include "chns/io.hpp"
#include "chns/random_fields.hpp"

using namespace chns;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("chns_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("defaults and overrides") {
  const RunConfig d = parse_config(json::object());
  CHECK(d.nx == 64);
  CHECK(d.init.kind == "rest");
  CHECK(d.optimizer.population == 64);

  const RunConfig c = parse_config(json::parse(R"({
    "grid": {"nx": 16, "ny": 32, "L": 3.0},
    "params": {"nu": 0.5, "R": 2},
    "time": {"dt": 0.01, "t_end": 0.5, "snapshot_every": 5},
    "init": {"kind": "spinodal", "amplitude": 0.1, "seed": 4},
    "optimizer": {"population": 10, "elites": 2, "seed": 9},
    "output": {"dir": "x"}
  })"));
  CHECK(c.ny == 32);
  CHECK(c.params.nu == 0.5);
  CHECK(c.params.R == 2.0);
  CHECK(c.scheme.dt == 0.01);
  CHECK(c.scheme.snapshot_every == 5);
  CHECK(c.init.seed == 4);
  CHECK(c.optimizer.elites == 2);
  CHECK(c.output_dir == "x");
}

TEST_CASE("schema violations") {
  auto bad = [](const char* text) { return parse_config(json::parse(text)); };
  CHECK_THROWS_AS(bad(R"({"time": {"dt": 0}})"), ConfigError);
  CHECK_THROWS_WITH_AS(bad(R"({"time": {"dt": 0}})"), "time.dt must be > 0", ConfigError);
  CHECK_THROWS_WITH_AS(bad(R"({"grid": {"nx": 16, "nz": 3}})"), "unknown key grid.nz", ConfigError);
  CHECK_THROWS_WITH_AS(bad(R"({"extra": 1})"), "unknown key extra", ConfigError);
  CHECK_THROWS_AS(bad(R"({"grid": {"nx": "16"}})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"grid": {"nx": 15}})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"grid": []})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"time": {"t_start": 1, "t_end": 1}})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"init": {"kind": "noise"}})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"init": {"kind": "file"}})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"params": {"R": -1}})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"optimizer": {"seed": -3}})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"optimizer": {"elites": 100}})"), ConfigError);
  CHECK_THROWS_AS(bad(R"([1, 2])"), ConfigError);
}

TEST_CASE("hash is canonical and ignores the output dir") {
  const RunConfig a = parse_config(json::parse(R"({"grid": {"nx": 16}})"));
  const RunConfig b = parse_config(json::parse(R"({"grid": {"nx": 16, "ny": 64}, "output": {"dir": "elsewhere"}})"));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  RunConfig c = a;
  override_seed(c, 5);
  CHECK(c.init.seed == 5);
  CHECK(c.optimizer.seed == 5);
  CHECK(config_hash(c) != config_hash(a));
  // A manifest carrying the canonical config parses back to the same hash.
  const json manifest = {{"config_hash", config_hash(c)}, {"config", json::parse(canonical_json(c).dump())}};
  CHECK(config_hash(parse_config(manifest)) == config_hash(c));
}

TEST_CASE("snapshot round trip") {
  Grid g(16, 8, 2.5);
  State s = State::rest(g, 0.375);
  s.phi = spinodal_field(g, 0.1, 0.2, 3.0, 1);
  s.u = normalized(FieldSampler(2).solenoidal(g, 3.0));
  const std::string bytes = encode_snapshot(s);
  CHECK(bytes.size() == 6 + 4 * 3 + 8 * 2 + 3 * 8 * g.size());
  CHECK(bytes.substr(0, 6) == "CHNS1\n");
  const State back = decode_snapshot(bytes);
  CHECK(back.t == 0.375);
  CHECK(back.phi.grid() == g);
  CHECK(std::ranges::equal(back.phi.values(), s.phi.values()));
  CHECK(std::ranges::equal(back.u.y().values(), s.u.y().values()));

  CHECK_THROWS_AS(decode_snapshot("CHNS2\n" + bytes.substr(6)), IoError);
  CHECK_THROWS_AS(decode_snapshot(bytes.substr(0, bytes.size() - 1)), IoError);

  const fs::path dir = scratch_dir("snap");
  write_snapshot(dir / "a.chns", s);
  CHECK(read_file(dir / "a.chns") == bytes);
  CHECK_FALSE(fs::exists(dir / "a.chns.tmp"));
  CHECK_THROWS_AS(read_snapshot(dir / "missing.chns"), IoError);
}

TEST_CASE("diagnostics CSV") {
  Diagnostics d;
  d.t = 0.1;
  d.mean_phi = 1.0 / 3.0;
  d.E_total = -2.5e-17;
  const std::string csv = diagnostics_csv({d});
  CHECK(csv.rfind("t,mean_phi,E_phi,E_kin,E_total,u_L2,phi_H1,control_L2\n", 0) == 0);
  const std::string row = csv.substr(csv.find('\n') + 1);
  CHECK(std::stod(row.substr(row.find(',') + 1)) == 1.0 / 3.0);
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(0.0) == "0");
}

TEST_CASE("initial states from config") {
  const RunConfig spin = parse_config(json::parse(R"({"grid": {"nx": 16, "ny": 16},
    "init": {"kind": "spinodal", "mean": 0.2, "amplitude": 0.05, "seed": 3}, "time": {"t_start": 0.5, "t_end": 1}})"));
  const State s = initial_state(spin);
  CHECK(s.t == 0.5);
  CHECK(std::abs(std::accumulate(s.phi.values().begin(), s.phi.values().end(), 0.0) / 256.0 - 0.2) < 1e-14);

  const fs::path dir = scratch_dir("init");
  write_snapshot(dir / "s.chns", s);
  json j = canonical_json(spin);
  j["init"]["kind"] = "file";
  j["init"]["path"] = (dir / "s.chns").string();
  const State f = initial_state(parse_config(j));
  CHECK(std::ranges::equal(f.phi.values(), s.phi.values()));

  j["grid"]["nx"] = 32;
  CHECK_THROWS_AS(initial_state(parse_config(j)), ConfigError);
}
