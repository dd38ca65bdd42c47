#include "chns/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chns/error.hpp"

namespace chns {

namespace spectral {

double k_squared(const Grid& grid, int jx, int jy) noexcept {
  if (grid.is_nyquist(jx, jy)) return 0.0;
  const double kx = grid.wavenumber(grid.wave_x(jx));
  const double ky = grid.wavenumber(grid.wave_y(jy));
  return kx * kx + ky * ky;
}

void dealias(const Grid& grid, std::span<Complex> c) {
  const int hx = grid.half_nx();
  for (int jy = 0; jy < grid.ny(); ++jy) {
    for (int jx = 0; jx < hx; ++jx) {
      if (!grid.keeps_mode(jx, jy)) c[static_cast<std::size_t>(jy) * hx + jx] = 0.0;
    }
  }
}

void derivative_x(const Grid& grid, std::span<const Complex> in, std::span<Complex> out) {
  const int hx = grid.half_nx();
  for (int jy = 0; jy < grid.ny(); ++jy) {
    for (int jx = 0; jx < hx; ++jx) {
      const std::size_t s = static_cast<std::size_t>(jy) * hx + jx;
      const double k = grid.is_nyquist(jx, jy) ? 0.0 : grid.wavenumber(grid.wave_x(jx));
      out[s] = Complex(0.0, k) * in[s];
    }
  }
}

void derivative_y(const Grid& grid, std::span<const Complex> in, std::span<Complex> out) {
  const int hx = grid.half_nx();
  for (int jy = 0; jy < grid.ny(); ++jy) {
    for (int jx = 0; jx < hx; ++jx) {
      const std::size_t s = static_cast<std::size_t>(jy) * hx + jx;
      const double k = grid.is_nyquist(jx, jy) ? 0.0 : grid.wavenumber(grid.wave_y(jy));
      out[s] = Complex(0.0, k) * in[s];
    }
  }
}

void leray(const Grid& grid, std::span<Complex> cx, std::span<Complex> cy) {
  const int hx = grid.half_nx();
  for (int jy = 0; jy < grid.ny(); ++jy) {
    for (int jx = 0; jx < hx; ++jx) {
      const double k2 = k_squared(grid, jx, jy);
      if (k2 == 0.0) continue;
      const std::size_t s = static_cast<std::size_t>(jy) * hx + jx;
      const double kx = grid.wavenumber(grid.wave_x(jx));
      const double ky = grid.wavenumber(grid.wave_y(jy));
      const Complex kdotu = (kx * cx[s] + ky * cy[s]) / k2;
      cx[s] -= kx * kdotu;
      cy[s] -= ky * kdotu;
    }
  }
}

double sobolev_sum(const Grid& grid, std::span<const Complex> c, int order) {
  const int hx = grid.half_nx();
  double sum = 0.0;
  for (int jy = 0; jy < grid.ny(); ++jy) {
    for (int jx = 0; jx < hx; ++jx) {
      const std::size_t s = static_cast<std::size_t>(jy) * hx + jx;
      double w = grid.parseval_weight(jx) * std::norm(c[s]);
      if (order > 0) w *= std::pow(k_squared(grid, jx, jy), order);
      sum += w;
    }
  }
  return sum * grid.area();
}

}  // namespace spectral

namespace {

SpectralCoeffs scaled(const SpectralCoeffs& in, auto&& multiplier) {
  SpectralCoeffs out(in.grid());
  const Grid& g = in.grid();
  const int hx = g.half_nx();
  for (int jy = 0; jy < g.ny(); ++jy) {
    for (int jx = 0; jx < hx; ++jx) {
      out.at(jx, jy) = multiplier(jx, jy) * in.at(jx, jy);
    }
  }
  return out;
}

}  // namespace

VelocityField grad(const ScalarField& f) {
  const Grid& g = f.grid();
  const SpectralCoeffs c = to_spectral(f);
  SpectralCoeffs dx(g), dy(g);
  spectral::derivative_x(g, c.data(), dx.data());
  spectral::derivative_y(g, c.data(), dy.data());
  return VelocityField(to_physical(dx), to_physical(dy));
}

ScalarField div(const VelocityField& v) {
  const Grid& g = v.grid();
  const SpectralCoeffs cx = to_spectral(v.x());
  const SpectralCoeffs cy = to_spectral(v.y());
  SpectralCoeffs d(g), tmp(g);
  spectral::derivative_x(g, cx.data(), d.data());
  spectral::derivative_y(g, cy.data(), tmp.data());
  for (std::size_t s = 0; s < d.data().size(); ++s) d.data()[s] += tmp.data()[s];
  return to_physical(d);
}

ScalarField laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  return to_physical(
      scaled(to_spectral(f), [&](int jx, int jy) { return -spectral::k_squared(g, jx, jy); }));
}

VelocityField leray_project(const VelocityField& v) {
  SpectralCoeffs cx = to_spectral(v.x());
  SpectralCoeffs cy = to_spectral(v.y());
  spectral::leray(v.grid(), cx.data(), cy.data());
  return VelocityField(to_physical(cx), to_physical(cy));
}

ScalarField bn_power(const ScalarField& f, double s, bool strict) {
  const Grid& g = f.grid();
  if (strict) {
    const double m = mean(f);
    if (std::abs(m) > 1e-12 * std::max(l2_norm(f) / std::sqrt(g.area()), 1e-300)) {
      throw DomainError("bn_power: input must have zero mean (mean = " + std::to_string(m) + ")");
    }
  }
  return to_physical(scaled(to_spectral(f), [&](int jx, int jy) {
    const double k2 = spectral::k_squared(g, jx, jy);
    return k2 == 0.0 ? 0.0 : std::pow(k2, s);
  }));
}

ScalarField dealias(const ScalarField& f) {
  SpectralCoeffs c = to_spectral(f);
  spectral::dealias(f.grid(), c.data());
  return to_physical(c);
}

VelocityField dealias(const VelocityField& v) { return VelocityField(dealias(v.x()), dealias(v.y())); }

// ---------------------------------------------------------------------------

double inner(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "inner");
  const auto a = f.values();
  const auto b = g.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum * f.grid().cell_area();
}

double inner(const VelocityField& u, const VelocityField& v) {
  return inner(u.x(), v.x()) + inner(u.y(), v.y());
}

double mean(const ScalarField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum / static_cast<double>(f.grid().size());
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }
double l2_norm(const VelocityField& v) { return std::sqrt(inner(v, v)); }

double sobolev_seminorm(const ScalarField& f, int order) {
  const SpectralCoeffs c = to_spectral(f);
  return std::sqrt(spectral::sobolev_sum(f.grid(), c.data(), order));
}

double h1_seminorm(const ScalarField& f) { return sobolev_seminorm(f, 1); }

double h1_seminorm(const VelocityField& v) {
  const double a = h1_seminorm(v.x());
  const double b = h1_seminorm(v.y());
  return std::sqrt(a * a + b * b);
}

double h2_norm(const ScalarField& f) {
  const Grid& g = f.grid();
  const SpectralCoeffs c = to_spectral(f);
  const int hx = g.half_nx();
  double sum = 0.0;
  for (int jy = 0; jy < g.ny(); ++jy) {
    for (int jx = 0; jx < hx; ++jx) {
      const double w = 1.0 + spectral::k_squared(g, jx, jy);
      sum += g.parseval_weight(jx) * w * w * std::norm(c.at(jx, jy));
    }
  }
  return std::sqrt(sum * g.area());
}

double spectral_l2_norm(const SpectralCoeffs& c) {
  return std::sqrt(spectral::sobolev_sum(c.grid(), c.data(), 0));
}

ScalarField refine(const ScalarField& f, int factor) {
  if (factor < 1) throw DomainError("refine: factor must be >= 1");
  if (factor == 1) return f;
  const Grid& g = f.grid();
  const Grid fine(g.nx() * factor, g.ny() * factor, g.length());
  const SpectralCoeffs c = to_spectral(f);
  SpectralCoeffs out(fine);
  const int hx = fine.half_nx();
  for (int jy = 0; jy < fine.ny(); ++jy) {
    const int ky = fine.wave_y(jy);
    if (std::abs(ky) > g.ny() / 2) continue;
    for (int jx = 0; jx < hx; ++jx) {
      const int kx = fine.wave_x(jx);
      if (kx > g.nx() / 2) continue;
      // A coarse Nyquist coefficient is shared between the +/- modes of the
      // finer grid.
      double split = 1.0;
      if (kx == g.nx() / 2) split *= 0.5;
      if (std::abs(ky) == g.ny() / 2) split *= 0.5;
      out.at(jx, jy) = split * c.mode(kx, ky);
    }
  }
  return to_physical(out);
}

double l4_norm(const ScalarField& f) {
  const ScalarField fine = refine(f, 2);
  double sum = 0.0;
  for (double v : fine.values()) sum += v * v * v * v;
  return std::pow(sum * fine.grid().cell_area(), 0.25);
}

double l4_norm(const VelocityField& v) {
  const ScalarField fx = refine(v.x(), 2);
  const ScalarField fy = refine(v.y(), 2);
  double sum = 0.0;
  const auto a = fx.values();
  const auto b = fy.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double m2 = a[i] * a[i] + b[i] * b[i];
    sum += m2 * m2;
  }
  return std::pow(sum * fx.grid().cell_area(), 0.25);
}

double linf_norm(const ScalarField& f) {
  const ScalarField fine = refine(f, 2);
  double m = 0.0;
  for (double v : fine.values()) m = std::max(m, std::abs(v));
  return m;
}

bool is_solenoidal(const VelocityField& v, double rel_tol) {
  return l2_norm(div(v)) <= rel_tol * h1_seminorm(v);
}

void require_solenoidal(const VelocityField& v, const char* where) {
  if (!is_solenoidal(v)) {
    throw DomainError(std::string(where) + ": velocity field is not divergence-free");
  }
}

double dual_norm(const VelocityField& v) {
  require_solenoidal(v, "dual_norm");
  const Grid& g = v.grid();
  const SpectralCoeffs cx = to_spectral(v.x());
  const SpectralCoeffs cy = to_spectral(v.y());
  const int hx = g.half_nx();
  double sum = 0.0;
  for (int jy = 0; jy < g.ny(); ++jy) {
    for (int jx = 0; jx < hx; ++jx) {
      const double k2 = spectral::k_squared(g, jx, jy);
      if (k2 == 0.0) continue;
      sum += g.parseval_weight(jx) * (std::norm(cx.at(jx, jy)) + std::norm(cy.at(jx, jy))) / k2;
    }
  }
  return std::sqrt(sum * g.area());
}

}  // namespace chns
