#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chns/config.hpp"

namespace chns {

// Outcome of one batch command. `pass` is false only when the command ran to
// completion but its acceptance criterion failed.
struct CommandResult {
  bool pass = true;
  std::string summary;
  std::vector<std::string> files;  // written, relative to the output dir
};

struct Invocation {
  std::string command;
  std::string audit_name;
  std::optional<double> t_mid;
  std::string output_dir;
};

CommandResult cmd_simulate(const RunConfig& c, const Invocation& inv);
CommandResult cmd_optimize(const RunConfig& c, const Invocation& inv);
CommandResult cmd_dpp_check(const RunConfig& c, const Invocation& inv);
CommandResult cmd_hjb_check(const RunConfig& c, const Invocation& inv);
CommandResult cmd_audit(const RunConfig& c, const Invocation& inv);

const std::vector<std::string>& audit_names();

// p/R values of the hjb-check sweep and its sample count.
inline constexpr double kHjbRatios[] = {0.0, 0.5, 1.0, 2.0};
inline constexpr long kHjbSamples = 10000;
inline constexpr double kHjbTolerance = 1e-3;

const char* library_version();

}  // namespace chns
