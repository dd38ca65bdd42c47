#include "chns/random_fields.hpp"

#include <cmath>

#include "chns/spectral.hpp"

namespace chns {

SpectralCoeffs FieldSampler::coefficients(const Grid& grid, double kmax, bool zero_mean) {
  SpectralCoeffs c(grid);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int hx = grid.half_nx();
  const double kmax2 = kmax * kmax;
  for (int jy = 0; jy < grid.ny(); ++jy) {
    for (int jx = 0; jx < hx; ++jx) {
      const int kx = grid.wave_x(jx);
      const int ky = grid.wave_y(jy);
      // Draw for every slot so the stream is independent of kmax.
      const double re = normal(rng_);
      const double im = normal(rng_);
      if (grid.is_nyquist(jx, jy)) continue;
      if (kx * kx + ky * ky > kmax2) continue;
      if (kx == 0 && ky < 0) continue;  // mirrored below
      if (kx == 0 && ky == 0) {
        if (!zero_mean) c.at(0, 0) = re;
        continue;
      }
      c.at(jx, jy) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  // Hermitian symmetry in the kx = 0 column.
  for (int jy = 1; jy < grid.ny(); ++jy) {
    const int ky = grid.wave_y(jy);
    if (ky < 0) c.at(0, jy) = std::conj(c.at(0, grid.ny() - jy));
  }
  return c;
}

ScalarField FieldSampler::scalar(const Grid& grid, double kmax, bool zero_mean) {
  return to_physical(coefficients(grid, kmax, zero_mean));
}

VelocityField FieldSampler::solenoidal(const Grid& grid, double kmax) {
  const SpectralCoeffs psi = coefficients(grid, kmax, true);
  SpectralCoeffs ux(grid), uy(grid);
  spectral::derivative_y(grid, psi.data(), ux.data());
  spectral::derivative_x(grid, psi.data(), uy.data());
  for (auto& v : uy.data()) v = -v;
  return VelocityField(to_physical(ux), to_physical(uy));
}

VelocityField FieldSampler::velocity(const Grid& grid, double kmax) {
  ScalarField ux = scalar(grid, kmax, false);
  ScalarField uy = scalar(grid, kmax, false);
  return VelocityField(std::move(ux), std::move(uy));
}

ScalarField spinodal_field(const Grid& grid, double mean_value, double amplitude, double kmax,
                           std::uint64_t seed) {
  FieldSampler sampler(seed);
  ScalarField g = sampler.scalar(grid, kmax, true);
  const double rms = l2_norm(g) / std::sqrt(grid.area());
  if (rms > 0.0) g *= amplitude / rms;
  for (double& v : g.values()) v += mean_value;
  return g;
}

ScalarField normalized(ScalarField f) {
  const double n = l2_norm(f);
  if (n > 0.0) f *= 1.0 / n;
  return f;
}

VelocityField normalized(VelocityField v) {
  const double n = l2_norm(v);
  if (n > 0.0) v *= 1.0 / n;
  return v;
}

}  // namespace chns
