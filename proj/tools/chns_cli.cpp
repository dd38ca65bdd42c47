// chns: batch driver for simulate / optimize / dpp-check / hjb-check / audit.
#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "chns/chns.h"

namespace {

int exit_code(chns_status s) {
  switch (s) {
    case CHNS_OK: return 0;
    case CHNS_E_CONFIG:
    case CHNS_E_IO:
    case CHNS_E_INVALID_ARGUMENT: return 1;
    case CHNS_E_AUDIT_FAILED: return 3;
    case CHNS_E_NUMERIC:
    case CHNS_E_INTERNAL: return 2;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cahn-Hilliard-Navier-Stokes optimal control lab"};
  app.set_version_flag("--version", std::string(chns_version()));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  double t_mid = 0.0;
  std::string audit_name;

  app.add_option("--config", config_path, "Run config (or manifest) JSON")->required();
  auto* out_opt = app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for the initial condition and the optimizer");

  auto* simulate = app.add_subcommand("simulate", "Integrate the state equation and write diagnostics");
  auto* optimize = app.add_subcommand("optimize", "Estimate the value function at t_start");
  auto* dpp = app.add_subcommand("dpp-check", "Dynamic programming residual at an intermediate time");
  auto* t_mid_opt = dpp->add_option("--t-mid", t_mid, "Intermediate time (default: window midpoint)");
  auto* hjb = app.add_subcommand("hjb-check", "Closed-form Hamiltonian against brute force");
  auto* audit = app.add_subcommand("audit", "Run a named audit");
  audit->add_option("name", audit_name, "mass | energy | continuous-dependence | time-continuity | "
                                        "value-continuity | functional-inequalities | self-convergence")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  chns_session* session = nullptr;
  chns_status s = chns_session_create_from_file(config_path.c_str(), &session);
  if (s != CHNS_OK) {
    std::fprintf(stderr, "chns: %s: %s\n", chns_status_string(s), chns_last_error());
    return exit_code(s);
  }
  if (*seed_opt) chns_session_set_seed(session, seed);
  if (*out_opt) chns_session_set_output_dir(session, out_dir.c_str());

  if (simulate->parsed()) {
    s = chns_simulate(session);
  } else if (optimize->parsed()) {
    s = chns_optimize(session);
  } else if (dpp->parsed()) {
    s = chns_dpp_check(session, *t_mid_opt ? 1 : 0, t_mid);
  } else if (hjb->parsed()) {
    s = chns_hjb_check(session);
  } else {
    s = chns_audit(session, audit_name.c_str());
  }

  if (s == CHNS_OK || s == CHNS_E_AUDIT_FAILED) {
    std::printf("%s\n", chns_session_summary(session));
  } else {
    std::fprintf(stderr, "chns: %s: %s\n", chns_status_string(s), chns_last_error());
  }
  chns_session_destroy(session);
  return exit_code(s);
}
