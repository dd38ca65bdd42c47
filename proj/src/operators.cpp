#include "chns/operators.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "chns/error.hpp"
#include "chns/spectral.hpp"

namespace chns {

Potential double_well() {
  Potential p;
  p.f = [](double s) { return 4.0 * s * s * s - 2.0 * s; };
  p.F = [](double s) { return s * s * (s * s - 1.0); };
  p.growth_m = 2;
  return p;
}

void verify_potential(const Potential& pot, double c_f, int samples, double span) {
  if (!pot.f || !pot.F) throw DomainError("potential: f and F must both be set");
  const double h = 1e-4;
  for (int i = 0; i < samples; ++i) {
    const double s = -span + 2.0 * span * (i + 0.5) / samples;
    const double fd = (pot.F(s + h) - pot.F(s - h)) / (2.0 * h);
    const double f = pot.f(s);
    if (std::abs(fd - f) > 1e-6 * std::max(std::abs(f), 1.0)) {
      std::ostringstream msg;
      msg << "potential: F' != f at s = " << s << " (" << fd << " vs " << f << ")";
      throw DomainError(msg.str());
    }
    const double fpp = (pot.f(s + h) - 2.0 * f + pot.f(s - h)) / (h * h);
    const double bound = c_f * (1.0 + std::pow(std::abs(s), pot.growth_m - 1));
    if (std::abs(fpp) > bound) {
      std::ostringstream msg;
      msg << "potential: |f''(" << s << ")| = " << std::abs(fpp) << " exceeds growth bound " << bound;
      throw DomainError(msg.str());
    }
  }
}

void validate(const Params& p) {
  if (!(p.nu > 0.0) || !(p.mobility > 0.0) || !(p.capillary > 0.0) || !(p.R >= 0.0) ||
      !std::isfinite(p.nu + p.mobility + p.capillary + p.R)) {
    throw DomainError("params: nu, mobility, capillary must be > 0 and R >= 0");
  }
}

VelocityField stokes_A(const VelocityField& u) {
  require_solenoidal(u, "stokes_A");
  VelocityField lap(laplacian(u.x()), laplacian(u.y()));
  VelocityField out = leray_project(lap);
  out *= -1.0;
  return out;
}

ScalarField neumann_AN(const ScalarField& f) {
  ScalarField out = laplacian(f);
  out *= -1.0;
  return out;
}

namespace {

// Pointwise product a*b, dealiased.
ScalarField product(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid());
  auto o = out.values();
  const auto x = a.values();
  const auto y = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * y[i];
  return dealias(out);
}

ScalarField advect(const VelocityField& u, const ScalarField& f) {
  const VelocityField g = grad(f);
  ScalarField out = product(u.x(), g.x());
  out += product(u.y(), g.y());
  return out;
}

}  // namespace

VelocityField convective_B(const VelocityField& u, const VelocityField& v) {
  require_same_grid(u.grid(), v.grid(), "convective_B");
  require_solenoidal(u, "convective_B");
  return leray_project(VelocityField(advect(u, v.x()), advect(u, v.y())));
}

ScalarField transport_B1(const VelocityField& u, const ScalarField& f) {
  require_same_grid(u.grid(), f.grid(), "transport_B1");
  require_solenoidal(u, "transport_B1");
  return advect(u, f);
}

VelocityField capillary_B2(const ScalarField& mu, const ScalarField& f) {
  require_same_grid(mu.grid(), f.grid(), "capillary_B2");
  const VelocityField g = grad(f);
  return leray_project(VelocityField(product(mu, g.x()), product(mu, g.y())));
}

ScalarField chemical_potential(const ScalarField& phi, const Potential& pot) {
  ScalarField bulk(phi.grid());
  auto b = bulk.values();
  const auto p = phi.values();
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = pot.f(p[i]);
  ScalarField mu = neumann_AN(phi);
  mu += dealias(bulk);
  return mu;
}

Energy energy(const ScalarField& phi, const VelocityField& u, const Potential& pot) {
  require_same_grid(phi.grid(), u.grid(), "energy");
  double bulk = 0.0;
  for (double v : phi.values()) bulk += pot.F(v);
  bulk *= phi.grid().cell_area();
  const double g = h1_seminorm(phi);
  const double k = l2_norm(u);
  Energy e;
  e.phi = 0.5 * g * g + bulk;
  e.kinetic = 0.5 * k * k;
  e.total = e.phi + e.kinetic;
  return e;
}

double lyapunov(const Energy& e, const Params& p) { return p.capillary * e.phi + e.kinetic; }

}  // namespace chns
