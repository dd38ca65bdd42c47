#pragma once

#include <cstddef>
#include <vector>

#include "chns/control_signal.hpp"
#include "chns/grid.hpp"
#include "chns/operators.hpp"

namespace chns {

struct State {
  double t = 0.0;
  ScalarField phi;
  VelocityField u;

  static State rest(const Grid& grid, double t = 0.0) { return {t, ScalarField(grid), VelocityField(grid)}; }
};

struct SchemeConfig {
  double dt = 1e-3;
  // S in the stabilizing term S A_N (phi^{n+1} - phi^n); 2 = max |f'| on [-1, 1].
  double stabilization = 2.0;
  bool dealias = true;
  double blowup_cap = 1e6;
  // Keep every k-th state in Trajectory::states (0: first and last only).
  int snapshot_every = 0;
};

void validate(const SchemeConfig& c);

// Per-node diagnostics. control_L2 is the norm of the control applied on the
// step that starts at t (the final node repeats the last applied value).
struct Diagnostics {
  double t = 0.0;
  double mean_phi = 0.0;
  double E_phi = 0.0;
  double E_kin = 0.0;
  double E_total = 0.0;
  double u_L2 = 0.0;
  double phi_H1 = 0.0;  // full H1 norm
  double control_L2 = 0.0;
  double phi_L2sq = 0.0;
  double u_L2sq = 0.0;
  double lyapunov = 0.0;    // K E_phi + E_kin
  double dissipation = 0.0; // K m ||grad mu||^2 + nu ||grad u||^2
  double phi_H2 = 0.0;      // ||lap phi||
  double phi_H3 = 0.0;      // ||grad lap phi||
};

struct StepRecord {
  double t0 = 0.0;
  double t1 = 0.0;
  double control_L2 = 0.0;
};

struct Trajectory {
  std::vector<State> states;
  std::vector<Diagnostics> diagnostics;  // one per node, including t0 and t_end
  std::vector<StepRecord> steps;

  const State& final_state() const { return states.back(); }
};

// Semi-implicit Euler stepper holding the spectral state and scratch buffers.
// Linear stiff terms (m A_N^2 + m S A_N on phi, nu A on u) are implicit;
// transport, convection, capillary forcing and f(phi) are explicit.
class Stepper {
 public:
  Stepper(const Grid& grid, const Params& params, const SchemeConfig& config);

  void reset(const State& s);
  // Advances by h under the control with coefficients (cx, cy); empty spans
  // mean U = 0.
  void advance(double h, std::span<const Complex> cx, std::span<const Complex> cy);

  State state() const;
  Diagnostics diagnostics(double control_norm) const;
  double time() const noexcept { return t_; }
  void set_time(double t) noexcept { t_ = t; }

 private:
  void refresh_chemical_potential();
  void check_blowup() const;

  Grid grid_;
  Params params_;
  SchemeConfig config_;
  double t_ = 0.0;

  std::vector<double> phi_, ux_, uy_, mu_;
  std::vector<Complex> phi_hat_, ux_hat_, uy_hat_, f_hat_, mu_hat_;
  std::vector<double> gx_, gy_, dxux_, dyux_, dxuy_, dyuy_, work_;
  std::vector<Complex> b1_hat_, cx_hat_, cy_hat_, capx_hat_, capy_hat_, tmp_hat_, scratch_;
};

// One step of size c.dt. The control must be divergence-free with norm <= R.
State step(const State& s, const VelocityField& control, const Params& p, const SchemeConfig& c);

// Integrates from s0.t to t_end, landing exactly on every control breakpoint
// and on t_end. The control window must cover [s0.t, t_end].
Trajectory simulate(const State& s0, const ControlSignal& control, double t_end, const Params& p,
                    const SchemeConfig& c);

Trajectory simulate_uncontrolled(const State& s0, double t_end, const Params& p, const SchemeConfig& c);

}  // namespace chns
