#pragma once

#include <functional>

#include "chns/grid.hpp"

namespace chns {

// Bulk free energy F and its derivative f = F'. `growth_m` is the exponent m
// in |f''(s)| <= C_f (1 + |s|^(m-1)).
struct Potential {
  std::function<double(double)> f;
  std::function<double(double)> F;
  int growth_m = 2;
};

// F(s) = s^2 (s^2 - 1), f(s) = 4 s^3 - 2 s.
Potential double_well();

// Checks F' = f by central differences (relative error <= 1e-6 at `samples`
// points in [-span, span]) and the growth bound with constant `c_f`.
// Throws DomainError describing the first violation.
void verify_potential(const Potential& pot, double c_f, int samples = 100, double span = 2.0);

struct Params {
  double nu = 1.0;         // viscosity
  double mobility = 1.0;   // m
  double capillary = 1.0;  // K
  double R = 1.0;          // control-ball radius
  Potential potential = double_well();
};

void validate(const Params& p);

// A u = -P lap u, for divergence-free u.
VelocityField stokes_A(const VelocityField& u);
// A_N f = -lap f.
ScalarField neumann_AN(const ScalarField& f);

// P[(u . grad) v], dealiased. u must be divergence-free.
VelocityField convective_B(const VelocityField& u, const VelocityField& v);
// u . grad f, dealiased. u must be divergence-free.
ScalarField transport_B1(const VelocityField& u, const ScalarField& f);
// P[mu grad f], dealiased.
VelocityField capillary_B2(const ScalarField& mu, const ScalarField& f);

// mu = A_N phi + f(phi), with the nonlinear part dealiased.
ScalarField chemical_potential(const ScalarField& phi, const Potential& pot);

struct Energy {
  double phi = 0.0;      // 1/2 ||grad phi||^2 + int F(phi)
  double kinetic = 0.0;  // 1/2 ||u||^2
  double total = 0.0;    // phi + kinetic
};

Energy energy(const ScalarField& phi, const VelocityField& u, const Potential& pot);

// K E(phi) + 1/2 ||u||^2, the functional dissipated by the uncontrolled flow.
double lyapunov(const Energy& e, const Params& p);

}  // namespace chns
