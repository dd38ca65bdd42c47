#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "chns/control_signal.hpp"
#include "chns/integrator.hpp"

namespace chns {

// Radial projection onto {||v|| <= R}.
VelocityField project_to_ball(const VelocityField& v, double R);

// J(tau, rho, v, U) split into its parts; total is
// (running_state + running_control) + terminal.
struct CostBreakdown {
  double running_state = 0.0;    // 1/2 int (||phi||^2 + ||u||^2) dt, trapezoidal
  double running_control = 0.0;  // 1/2 int ||U||^2 dt, exact for piecewise-constant U
  double terminal = 0.0;         // 1/2 (||phi(T)||^2 + ||u(T)||^2)
  double total = 0.0;
};

CostBreakdown cost_from_trajectory(const Trajectory& traj);
double terminal_cost(const State& s);

// Simulates s0 under U over U's window and evaluates J. U must start at s0.t.
CostBreakdown evaluate_cost(const State& s0, const ControlSignal& U, const Params& p, const SchemeConfig& c);

// Divergence-free fields u = (d/dy psi, -d/dx psi) for the eight lowest
// stream-function modes cos/sin(k.x), k in {(1,0), (0,1), (1,1), (1,-1)} (in
// units of 2 pi / L), normalized to unit L2 norm. The basis is orthonormal, so
// the L2 norm of a synthesized field equals the Euclidean norm of its
// coefficients.
class ControlBasis {
 public:
  static constexpr std::size_t kModes = 8;

  explicit ControlBasis(const Grid& grid);

  const Grid& grid() const noexcept { return modes_.front().grid(); }
  std::size_t size() const noexcept { return modes_.size(); }
  const VelocityField& mode(std::size_t i) const { return modes_.at(i); }

  VelocityField synthesize(std::span<const double> coeffs) const;
  ControlSignal signal(std::vector<double> breakpoints, std::vector<std::vector<double>> modes) const;

 private:
  std::vector<VelocityField> modes_;
};

std::vector<double> uniform_breakpoints(double tau, double T, int intervals);

// Scales c onto the Euclidean R-ball when it lies outside.
void project_coefficients(std::span<double> c, double R);

struct Window {
  double tau = 0.0;
  double T = 1.0;
};

struct OptimizerConfig {
  int population = 64;
  int elites = 8;
  int iterations = 30;
  int fd_passes = 2;
  double fd_step = 1e-3;
  double fd_shrink = 0.5;
  int intervals = 4;
  std::uint64_t seed = 0;
  // Initial sampling spread per coordinate, as a fraction of R.
  double initial_spread = 0.5;
  // Weight of the elite statistics in the mean/spread update.
  double smoothing = 0.7;
};

void validate(const OptimizerConfig& o);

// Upper estimate of the value function at (window.tau, s0).
struct ValueEstimate {
  double value = 0.0;
  ControlSignal best_control;
  long evals = 0;
  std::uint64_t seed = 0;
  Window window;
  std::vector<double> history;  // best value after each CEM generation and FD pass
};

// Cross-entropy search over piecewise-constant controls in the low-mode basis
// followed by coordinate finite-difference descent. The zero control is in the
// first generation, so the result never exceeds J(s0, 0).
ValueEstimate value_estimate(const State& s0, Window window, const Params& p, const SchemeConfig& c,
                             const OptimizerConfig& opt);

struct DppCandidate {
  std::string label;
  double first_leg_cost = 0.0;  // running cost on [tau, t_mid]
  double mid_value = 0.0;       // V^(t_mid, state reached)
  double concat_value = 0.0;    // first_leg_cost + mid_value
  double concat_direct = 0.0;   // J of the concatenated control, simulated end to end
};

struct DppReport {
  double t_mid = 0.0;
  double v_tau_optimizer = 0.0;  // value_estimate at tau alone
  double v_tau = 0.0;            // best admissible cost seen at tau (optimizer or concatenations)
  double best_concat = 0.0;
  double residual = 0.0;         // |v_tau - best_concat|
  double one_sided_slack = 0.0;  // max(0, v_tau - best_concat)
  long evals = 0;
  std::vector<DppCandidate> candidates;
};

// Compares V^(tau) with min over first legs of (running cost + V^(t_mid, .)).
// First-leg candidates are the restriction of the optimizer's best control and
// U = 0. Every V^ uses the same optimizer budget and seed; V^(T, x) is the
// terminal cost.
DppReport dpp_residual(const State& s0, double t_mid, Window window, const Params& p,
                       const SchemeConfig& c, const OptimizerConfig& opt);

// --- Hamiltonian -----------------------------------------------------------

// inf over the R-ball of (U, p) + 1/2 ||U||^2 as a function of ||p||:
// -p^2/2 for p <= R, -R p + R^2/2 otherwise.
double hamiltonian_closed(double p_norm, double R);

// (U, p) + 1/2 ||U||^2.
double hamiltonian_objective(const VelocityField& U, const VelocityField& p);

// Minimizer of the objective over the R-ball: -p inside, -p R/||p|| outside.
VelocityField feedback_sigma(const VelocityField& p, double R);

// Calls fn on n divergence-free controls in the R-ball. Samples lie in a random
// plane through p: about a tenth on the circle ||U|| = R at equally spaced
// angles with a random phase, the rest on a randomly shifted square lattice
// inside the disc, topped up with uniform disc samples.
void for_each_ball_sample(const VelocityField& p, double R, long n, std::uint64_t seed,
                          const std::function<void(const VelocityField&)>& fn);

struct HamiltonianCheck {
  double closed = 0.0;       // hamiltonian_closed(||p||, R)
  double monte_carlo = 0.0;  // min over the sampled controls only
  double brute_force = 0.0;  // min over samples plus the candidates 0 and sigma(p)
  long samples = 0;
};

HamiltonianCheck hamiltonian_bruteforce(const VelocityField& p, double R, long n, std::uint64_t seed);

}  // namespace chns
