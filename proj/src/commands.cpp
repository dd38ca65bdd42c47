#include "chns/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include <fftw3.h>

#include "chns/audits.hpp"
#include "chns/error.hpp"
#include "chns/io.hpp"
#include "chns/random_fields.hpp"
#include "chns/spectral.hpp"

namespace chns {

namespace fs = std::filesystem;

const char* library_version() { return "1.0.0"; }

namespace {

void write_manifest(const RunConfig& c, const Invocation& inv, const std::vector<std::string>& files) {
  nlohmann::ordered_json m;
  m["config_hash"] = config_hash(c);
  m["seed"] = c.optimizer.seed;
  m["init_seed"] = c.init.seed;
  m["versions"] = {{"chns", library_version()}, {"fftw", std::string(fftw_version)}, {"compiler", std::string(__VERSION__)}};
  nlohmann::ordered_json args;
  args["command"] = inv.command;
  if (!inv.audit_name.empty()) args["audit"] = inv.audit_name;
  if (inv.t_mid) args["t_mid"] = *inv.t_mid;
  m["invocation"] = args;
  m["outputs"] = files;
  m["config"] = canonical_json(c);
  write_atomic(fs::path(inv.output_dir) / "manifest.json", dump(m));
}

CommandResult finish(CommandResult r, const RunConfig& c, const Invocation& inv) {
  write_manifest(c, inv, r.files);
  return r;
}

void emit(CommandResult& r, const Invocation& inv, const std::string& name, const std::string& content) {
  write_atomic(fs::path(inv.output_dir) / name, content);
  r.files.push_back(name);
}

Window window_of(const RunConfig& c) { return Window{c.t_start, c.t_end}; }

}  // namespace

CommandResult cmd_simulate(const RunConfig& c, const Invocation& inv) {
  const State s0 = initial_state(c);
  const Trajectory traj = simulate(s0, control_signal(c), c.t_end, c.params, c.scheme);
  CommandResult r;
  emit(r, inv, "diagnostics.csv", diagnostics_csv(traj.diagnostics));
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    char name[48];
    std::snprintf(name, sizeof name, "snapshots/state_%06zu.chns", i);
    emit(r, inv, name, encode_snapshot(traj.states[i]));
  }
  r.summary = "simulated " + std::to_string(traj.steps.size()) + " steps to t = " + format_double(traj.diagnostics.back().t);
  return finish(std::move(r), c, inv);
}

CommandResult cmd_optimize(const RunConfig& c, const Invocation& inv) {
  const ValueEstimate v = value_estimate(initial_state(c), window_of(c), c.params, c.scheme, c.optimizer);
  CommandResult r;
  emit(r, inv, "value.json", dump(to_json(v)));
  r.summary = "value " + format_double(v.value) + " after " + std::to_string(v.evals) + " cost evaluations";
  return finish(std::move(r), c, inv);
}

CommandResult cmd_dpp_check(const RunConfig& c, const Invocation& inv) {
  const double t_mid = inv.t_mid.value_or(0.5 * (c.t_start + c.t_end));
  if (!(t_mid >= c.t_start && t_mid <= c.t_end)) throw ConfigError("--t-mid must lie in [t_start, t_end]");
  const DppReport d = dpp_residual(initial_state(c), t_mid, window_of(c), c.params, c.scheme, c.optimizer);
  CommandResult r;
  const double rel = d.v_tau != 0.0 ? d.residual / d.v_tau : d.residual;
  r.pass = d.one_sided_slack <= 1e-9 && rel <= 0.05;
  auto j = to_json(d);
  j["pass"] = r.pass;
  emit(r, inv, "dpp.json", dump(j));
  r.summary = "one-sided slack " + format_double(d.one_sided_slack) + ", relative residual " + format_double(rel);
  return finish(std::move(r), c, inv);
}

CommandResult cmd_hjb_check(const RunConfig& c, const Invocation& inv) {
  const Grid g = c.grid();
  const double R = c.params.R;
  FieldSampler sampler(c.optimizer.seed);
  const VelocityField dir = normalized(sampler.solenoidal(g, g.nx() / 4.0));
  std::string csv = "p_over_R,p_norm,closed,monte_carlo,brute_force,gap_monte_carlo,gap_brute_force\n";
  double worst = 0.0;
  for (double ratio : kHjbRatios) {
    const VelocityField p = (ratio * R) * dir;
    const HamiltonianCheck h = hamiltonian_bruteforce(p, R, kHjbSamples, c.optimizer.seed);
    const double gap_mc = std::abs(h.monte_carlo - h.closed);
    const double gap_bf = std::abs(h.brute_force - h.closed);
    worst = std::max({worst, gap_mc, gap_bf});
    for (double v : {ratio, l2_norm(p), h.closed, h.monte_carlo, h.brute_force, gap_mc}) csv += format_double(v) + ",";
    csv += format_double(gap_bf) + "\n";
  }
  CommandResult r;
  r.pass = worst <= kHjbTolerance;
  emit(r, inv, "hamiltonian.csv", csv);
  r.summary = "max gap " + format_double(worst);
  return finish(std::move(r), c, inv);
}

const std::vector<std::string>& audit_names() {
  static const std::vector<std::string> names = {"mass", "energy", "continuous-dependence", "time-continuity",
                                                 "value-continuity", "functional-inequalities",
                                                 "self-convergence"};
  return names;
}

CommandResult cmd_audit(const RunConfig& c, const Invocation& inv) {
  const std::string& name = inv.audit_name;
  const State s0 = initial_state(c);
  const double halving[] = {1.0, 0.5, 0.25};
  AuditReport report;
  if (name == "mass") {
    report = audit_mass_conservation(simulate(s0, control_signal(c), c.t_end, c.params, c.scheme));
  } else if (name == "energy") {
    report = audit_energy_law(s0, c.params, c.scheme, c.t_end);
  } else if (name == "continuous-dependence") {
    const double deltas[] = {1e-2, 5e-3, 2.5e-3};
    report = audit_continuous_dependence(s0, deltas, c.params, c.scheme, c.t_end, c.init.seed + 1);
  } else if (name == "time-continuity") {
    const double horizons[] = {1e-2, 5e-3, 2.5e-3};
    report = audit_time_continuity(s0, horizons, c.params, c.scheme);
  } else if (name == "value-continuity") {
    const auto pairs = value_continuity_pairs(s0, 0.1, 3, c.init.seed + 1);
    report = audit_value_continuity(pairs, window_of(c), c.params, c.scheme, c.optimizer);
  } else if (name == "functional-inequalities") {
    report = audit_functional_inequalities(20, c.grid(), c.init.seed);
  } else if (name == "self-convergence") {
    std::vector<double> dts;
    for (double f : halving) dts.push_back(c.scheme.dt * f);
    report = audit_self_convergence(s0, c.params, c.scheme, c.t_end, dts);
  } else {
    std::string known;
    for (const auto& n : audit_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown audit '" + name + "' (expected one of " + known + ")");
  }
  CommandResult r;
  r.pass = report.pass;
  emit(r, inv, "audit_" + name + ".json", dump(to_json(report)));
  r.summary = "audit " + name + (report.pass ? " passed" : " failed") + ", fitted constant " +
              format_double(report.fitted_constant) + ", fitted order " + format_double(report.fitted_order);
  return finish(std::move(r), c, inv);
}

}  // namespace chns
