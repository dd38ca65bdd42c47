#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "chns/control.hpp"
#include "chns/integrator.hpp"

namespace chns {

struct InitConfig {
  std::string kind = "rest";  // rest | spinodal | file
  double mean = 0.0;
  double amplitude = 0.05;
  double kmax = 4.0;
  std::uint64_t seed = 0;
  std::string path;
};

struct ControlConfig {
  std::string kind = "zero";  // zero | file
  std::string path;
};

struct RunConfig {
  int nx = 64;
  int ny = 64;
  double L = 6.283185307179586;
  Params params;
  SchemeConfig scheme;
  double t_start = 0.0;
  double t_end = 1.0;
  InitConfig init;
  ControlConfig control;
  OptimizerConfig optimizer;
  std::string output_dir = "out";

  Grid grid() const { return Grid(nx, ny, L); }
};

// Parses and validates a config document. Unknown keys, wrong types and
// out-of-range values raise ConfigError naming the offending key. A run
// manifest is accepted too: its "config" member is used.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Canonical form with every default filled in. output.dir is left out so the
// hash does not depend on where results go.
nlohmann::ordered_json canonical_json(const RunConfig& c);

// FNV-1a 64 of the canonical JSON text, as 16 hex digits.
std::string config_hash(const RunConfig& c);

// Replaces both the init and the optimizer seed.
void override_seed(RunConfig& c, std::uint64_t seed);

State initial_state(const RunConfig& c);
ControlSignal control_signal(const RunConfig& c);

}  // namespace chns
