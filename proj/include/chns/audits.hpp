#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chns/control.hpp"
#include "chns/integrator.hpp"

namespace chns {

struct AuditRecord {
  std::string label;
  std::vector<std::pair<std::string, double>> values;

  double get(const std::string& key) const;
};

struct AuditReport {
  std::string name;
  long samples = 0;
  double fitted_constant = 0.0;
  double fitted_order = 0.0;
  bool pass = false;
  std::vector<AuditRecord> details;
};

// Least-squares slope of log(y) against log(x) over the positive pairs.
double loglog_slope(std::span<const double> x, std::span<const double> y);
// Spearman rank correlation (average ranks for ties).
double spearman(std::span<const double> x, std::span<const double> y);

// max_n |<phi(t_n)> - <phi(t_0)>| <= tol.
AuditReport audit_mass_conservation(const Trajectory& traj, double tol = 1e-12);

// Perturbs (rho, v) along a fixed random direction with
// ||d rho||^2 + ||d v||_{V'}^2 = 1, scaled by each delta, and records
// r(delta) = sup_t (||phi1 - phi2||^2 + ||u1 - u2||_{V'}^2) for U = 0 on
// [t0, t_end]. Passes when the slope of log r against log delta^2 is >= 0.9 and
// max/min of r/delta^2 is <= 10.
AuditReport audit_continuous_dependence(const State& base, std::span<const double> deltas,
                                        const Params& p, const SchemeConfig& c, double t_end,
                                        std::uint64_t seed);

// q(h) = ||grad(phi(t0+h) - rho)||^2 + ||u(t0+h) - v||^2 with U = 0. Passes when
// q(h)/h stays within a factor 10 across the horizons.
AuditReport audit_time_continuity(const State& s0, std::span<const double> horizons, const Params& p,
                                  const SchemeConfig& c);

// Pairs (base, base + delta d) for delta = delta0, delta0/2, ..., `count` of them.
std::vector<std::pair<State, State>> value_continuity_pairs(const State& base, double delta0, int count,
                                                            std::uint64_t seed);

// Fits the least L with |V^1 - V^2| <= L (||rho1 - rho2|| + ||v1 - v2||_{V'}) over
// the pairs; passes when L is finite and the differences are rank-correlated
// with the distances (Spearman > 0.8).
AuditReport audit_value_continuity(std::span<const std::pair<State, State>> pairs, Window window,
                                   const Params& p, const SchemeConfig& c, const OptimizerConfig& opt);

// Ladyzhenskaya, Agmon and Poincare-Wirtinger ratios for n zero-mean fields
// (the lowest Fourier mode plus random fields with |k| <= nx/4 of the base
// grid) on the base grid and two refinements. Passes when each fitted constant
// changes by a factor within [0.5, 2] per refinement.
AuditReport audit_functional_inequalities(int n, const Grid& grid, std::uint64_t seed);

// Uncontrolled run: D = K E(phi) + 1/2 ||u||^2 must not increase by more than
// slack * h per step, and int (K m ||grad mu||^2 + nu ||grad u||^2) dt must match
// D(t0) - D(t_end) within 5%.
AuditReport audit_energy_law(const State& s0, const Params& p, const SchemeConfig& c, double t_end,
                             double slack = 1e-8);

// Richardson self-convergence from runs at each dt: differences between
// consecutive refinements at t_end; fitted_order is the log-log slope, pass
// when >= 0.9.
AuditReport audit_self_convergence(const State& s0, const Params& p, const SchemeConfig& c, double t_end,
                                   std::span<const double> dts);

}  // namespace chns
