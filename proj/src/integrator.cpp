#include "chns/integrator.hpp"

#include <cmath>
#include <sstream>

#include "chns/error.hpp"
#include "chns/spectral.hpp"

namespace chns {

void validate(const SchemeConfig& c) {
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw DomainError("scheme: dt must be > 0");
  if (!(c.stabilization >= 0.0)) throw DomainError("scheme: stabilization must be >= 0");
  if (!(c.blowup_cap > 0.0)) throw DomainError("scheme: blowup_cap must be > 0");
  if (c.snapshot_every < 0) throw DomainError("scheme: snapshot_every must be >= 0");
}

Stepper::Stepper(const Grid& grid, const Params& params, const SchemeConfig& config)
    : grid_(grid), params_(params), config_(config) {
  validate(params_);
  validate(config_);
  const std::size_t n = grid.size();
  const std::size_t m = grid.spectral_size();
  for (auto* v : {&phi_, &ux_, &uy_, &mu_, &gx_, &gy_, &dxux_, &dyux_, &dxuy_, &dyuy_, &work_}) {
    v->assign(n, 0.0);
  }
  for (auto* v : {&phi_hat_, &ux_hat_, &uy_hat_, &f_hat_, &mu_hat_, &b1_hat_, &cx_hat_, &cy_hat_,
                  &capx_hat_, &capy_hat_, &tmp_hat_, &scratch_}) {
    v->assign(m, Complex{});
  }
}

void Stepper::reset(const State& s) {
  require_same_grid(grid_, s.phi.grid(), "Stepper::reset");
  require_same_grid(grid_, s.u.grid(), "Stepper::reset");
  if (!s.phi.all_finite() || !s.u.all_finite()) throw DomainError("Stepper::reset: non-finite state");
  require_solenoidal(s.u, "Stepper::reset");
  t_ = s.t;
  std::copy(s.phi.values().begin(), s.phi.values().end(), phi_.begin());
  std::copy(s.u.x().values().begin(), s.u.x().values().end(), ux_.begin());
  std::copy(s.u.y().values().begin(), s.u.y().values().end(), uy_.begin());
  forward_transform(grid_, phi_, phi_hat_);
  forward_transform(grid_, ux_, ux_hat_);
  forward_transform(grid_, uy_, uy_hat_);
  refresh_chemical_potential();
}

void Stepper::refresh_chemical_potential() {
  const auto& f = params_.potential.f;
  for (std::size_t i = 0; i < phi_.size(); ++i) work_[i] = f(phi_[i]);
  forward_transform(grid_, work_, f_hat_);
  if (config_.dealias) spectral::dealias(grid_, f_hat_);
  const int hx = grid_.half_nx();
  for (int jy = 0; jy < grid_.ny(); ++jy) {
    for (int jx = 0; jx < hx; ++jx) {
      const std::size_t s = static_cast<std::size_t>(jy) * hx + jx;
      mu_hat_[s] = spectral::k_squared(grid_, jx, jy) * phi_hat_[s] + f_hat_[s];
    }
  }
}

void Stepper::advance(double h, std::span<const Complex> cx, std::span<const Complex> cy) {
  const Grid& g = grid_;
  const std::size_t n = g.size();
  const bool controlled = !cx.empty();
  if (controlled && (cx.size() != g.spectral_size() || cy.size() != g.spectral_size())) {
    throw DimensionError("Stepper::advance: control coefficient size mismatch");
  }

  auto to_phys = [&](std::span<const Complex> in, std::vector<double>& out) {
    inverse_transform(g, in, out, scratch_);
  };
  auto to_spec = [&](std::vector<Complex>& out) {
    forward_transform(g, work_, out);
    if (config_.dealias) spectral::dealias(g, out);
  };

  // Physical-space factors of the explicit terms.
  spectral::derivative_x(g, phi_hat_, tmp_hat_);
  to_phys(tmp_hat_, gx_);
  spectral::derivative_y(g, phi_hat_, tmp_hat_);
  to_phys(tmp_hat_, gy_);
  to_phys(mu_hat_, mu_);
  spectral::derivative_x(g, ux_hat_, tmp_hat_);
  to_phys(tmp_hat_, dxux_);
  spectral::derivative_y(g, ux_hat_, tmp_hat_);
  to_phys(tmp_hat_, dyux_);
  spectral::derivative_x(g, uy_hat_, tmp_hat_);
  to_phys(tmp_hat_, dxuy_);
  spectral::derivative_y(g, uy_hat_, tmp_hat_);
  to_phys(tmp_hat_, dyuy_);

  for (std::size_t i = 0; i < n; ++i) work_[i] = ux_[i] * gx_[i] + uy_[i] * gy_[i];
  to_spec(b1_hat_);
  for (std::size_t i = 0; i < n; ++i) work_[i] = ux_[i] * dxux_[i] + uy_[i] * dyux_[i];
  to_spec(cx_hat_);
  for (std::size_t i = 0; i < n; ++i) work_[i] = ux_[i] * dxuy_[i] + uy_[i] * dyuy_[i];
  to_spec(cy_hat_);
  for (std::size_t i = 0; i < n; ++i) work_[i] = mu_[i] * gx_[i];
  to_spec(capx_hat_);
  for (std::size_t i = 0; i < n; ++i) work_[i] = mu_[i] * gy_[i];
  to_spec(capy_hat_);

  // Transport has zero mean for solenoidal u; pin it so the mean of phi is
  // carried over bit for bit. The capillary force's mean is pure aliasing
  // error and is dropped so the mean flow only responds to the control.
  b1_hat_[0] = 0.0;
  capx_hat_[0] = 0.0;
  capy_hat_[0] = 0.0;

  const double K = params_.capillary;
  for (std::size_t s = 0; s < g.spectral_size(); ++s) {
    cx_hat_[s] = -cx_hat_[s] + K * capx_hat_[s];
    cy_hat_[s] = -cy_hat_[s] + K * capy_hat_[s];
    if (controlled) {
      cx_hat_[s] += cx[s];
      cy_hat_[s] += cy[s];
    }
  }
  spectral::leray(g, cx_hat_, cy_hat_);

  const double m = params_.mobility;
  const double S = config_.stabilization;
  const double nu = params_.nu;
  const int hx = g.half_nx();
  for (int jy = 0; jy < g.ny(); ++jy) {
    for (int jx = 0; jx < hx; ++jx) {
      const std::size_t s = static_cast<std::size_t>(jy) * hx + jx;
      const double k2 = spectral::k_squared(g, jx, jy);
      const Complex rhs_phi =
          phi_hat_[s] + h * m * S * k2 * phi_hat_[s] - h * b1_hat_[s] - h * m * k2 * f_hat_[s];
      phi_hat_[s] = rhs_phi / (1.0 + h * m * (k2 * k2 + S * k2));
      const double visc = 1.0 / (1.0 + h * nu * k2);
      ux_hat_[s] = (ux_hat_[s] + h * cx_hat_[s]) * visc;
      uy_hat_[s] = (uy_hat_[s] + h * cy_hat_[s]) * visc;
    }
  }
  spectral::leray(g, ux_hat_, uy_hat_);
  if (config_.dealias) {
    spectral::dealias(g, phi_hat_);
    spectral::dealias(g, ux_hat_);
    spectral::dealias(g, uy_hat_);
  }
  to_phys(phi_hat_, phi_);
  to_phys(ux_hat_, ux_);
  to_phys(uy_hat_, uy_);
  t_ += h;
  refresh_chemical_potential();
  check_blowup();
}

void Stepper::check_blowup() const {
  const double u2 = spectral::sobolev_sum(grid_, ux_hat_, 0) + spectral::sobolev_sum(grid_, uy_hat_, 0);
  const double p2 = spectral::sobolev_sum(grid_, phi_hat_, 0) + spectral::sobolev_sum(grid_, phi_hat_, 1);
  const double u_norm = std::sqrt(u2);
  const double phi_h1 = std::sqrt(p2);
  const double cap = config_.blowup_cap;
  if (!std::isfinite(u_norm) || !std::isfinite(phi_h1) || u_norm > cap || phi_h1 > cap) {
    std::ostringstream msg;
    msg << "blow-up at t = " << t_ << ": ||u|| = " << u_norm << ", ||phi||_H1 = " << phi_h1
        << " (cap " << cap << ")";
    throw BlowUpError(msg.str(), t_);
  }
}

State Stepper::state() const {
  return {t_, ScalarField(grid_, phi_), VelocityField(ScalarField(grid_, ux_), ScalarField(grid_, uy_))};
}

Diagnostics Stepper::diagnostics(double control_norm) const {
  const Grid& g = grid_;
  const double dA = g.cell_area();
  Diagnostics d;
  d.t = t_;
  double sum = 0.0, sq = 0.0, bulk = 0.0, usq = 0.0;
  const auto& F = params_.potential.F;
  for (std::size_t i = 0; i < phi_.size(); ++i) {
    sum += phi_[i];
    sq += phi_[i] * phi_[i];
    bulk += F(phi_[i]);
    usq += ux_[i] * ux_[i] + uy_[i] * uy_[i];
  }
  d.mean_phi = sum / static_cast<double>(g.size());
  d.phi_L2sq = sq * dA;
  d.u_L2sq = usq * dA;
  const double grad_phi_sq = spectral::sobolev_sum(g, phi_hat_, 1);
  d.E_phi = 0.5 * grad_phi_sq + bulk * dA;
  d.E_kin = 0.5 * d.u_L2sq;
  d.E_total = d.E_phi + d.E_kin;
  d.u_L2 = std::sqrt(d.u_L2sq);
  d.phi_H1 = std::sqrt(d.phi_L2sq + grad_phi_sq);
  d.control_L2 = control_norm;
  d.lyapunov = params_.capillary * d.E_phi + d.E_kin;
  const double grad_mu_sq = spectral::sobolev_sum(g, mu_hat_, 1);
  const double grad_u_sq = spectral::sobolev_sum(g, ux_hat_, 1) + spectral::sobolev_sum(g, uy_hat_, 1);
  d.dissipation = params_.capillary * params_.mobility * grad_mu_sq + params_.nu * grad_u_sq;
  d.phi_H2 = std::sqrt(spectral::sobolev_sum(g, phi_hat_, 2));
  d.phi_H3 = std::sqrt(spectral::sobolev_sum(g, phi_hat_, 3));
  return d;
}

namespace {

struct ControlCoeffs {
  std::vector<Complex> x, y;
  double norm = 0.0;
};

ControlCoeffs control_coeffs(const VelocityField& v, const Params& p) {
  require_solenoidal(v, "control");
  ControlCoeffs c;
  c.norm = l2_norm(v);
  if (c.norm > p.R * (1.0 + 1e-12) + 1e-300) {
    std::ostringstream msg;
    msg << "control norm " << c.norm << " exceeds the admissible radius R = " << p.R;
    throw DomainError(msg.str());
  }
  if (c.norm == 0.0) return c;
  c.x.resize(v.grid().spectral_size());
  c.y.resize(v.grid().spectral_size());
  forward_transform(v.grid(), v.x().values(), c.x);
  forward_transform(v.grid(), v.y().values(), c.y);
  return c;
}

}  // namespace

State step(const State& s, const VelocityField& control, const Params& p, const SchemeConfig& c) {
  require_same_grid(s.phi.grid(), control.grid(), "step");
  Stepper stepper(s.phi.grid(), p, c);
  stepper.reset(s);
  const ControlCoeffs cc = control_coeffs(control, p);
  stepper.advance(c.dt, cc.x, cc.y);
  return stepper.state();
}

Trajectory simulate(const State& s0, const ControlSignal& control, double t_end, const Params& p,
                    const SchemeConfig& c) {
  if (!(t_end > s0.t)) throw DomainError("simulate: t_end must exceed the initial time");
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
  if (control.tau() > s0.t + eps || control.T() < t_end - eps) {
    throw DomainError("simulate: control window does not cover [t0, t_end]");
  }
  require_same_grid(s0.phi.grid(), control.grid(), "simulate");
  validate(c);

  std::vector<ControlCoeffs> coeffs;
  coeffs.reserve(control.intervals());
  for (const auto& v : control.values()) coeffs.push_back(control_coeffs(v, p));

  // Segment ends: interior breakpoints inside (t0, t_end), then t_end.
  std::vector<double> ends;
  for (std::size_t i = 1; i + 1 < control.breakpoints().size(); ++i) {
    const double b = control.breakpoints()[i];
    if (b > s0.t + eps && b < t_end - eps) ends.push_back(b);
  }
  ends.push_back(t_end);

  Stepper stepper(s0.phi.grid(), p, c);
  stepper.reset(s0);
  Trajectory traj;
  traj.states.push_back(s0);

  // Node times live on the per-segment lattice a + k h rather than on the
  // accumulated sum of step sizes.
  double a = s0.t;
  long step_index = 0;
  for (double b : ends) {
    const ControlCoeffs& cc = coeffs[control.interval_at(a)];
    const auto nsteps = static_cast<long>(std::max(1.0, std::ceil((b - a) / c.dt - 1e-9)));
    const double h = (b - a) / static_cast<double>(nsteps);
    for (long k = 0; k < nsteps; ++k) {
      traj.diagnostics.push_back(stepper.diagnostics(cc.norm));
      const double t0 = stepper.time();
      stepper.advance(h, cc.x, cc.y);
      stepper.set_time(k + 1 == nsteps ? b : a + h * static_cast<double>(k + 1));
      ++step_index;
      traj.steps.push_back({t0, stepper.time(), cc.norm});
      if (c.snapshot_every > 0 && step_index % c.snapshot_every == 0) {
        traj.states.push_back(stepper.state());
      }
    }
    a = b;
  }
  traj.diagnostics.push_back(stepper.diagnostics(traj.steps.back().control_L2));
  if (traj.states.back().t != t_end) traj.states.push_back(stepper.state());
  return traj;
}

Trajectory simulate_uncontrolled(const State& s0, double t_end, const Params& p, const SchemeConfig& c) {
  return simulate(s0, ControlSignal::zero(s0.phi.grid(), s0.t, t_end), t_end, p, c);
}

}  // namespace chns
