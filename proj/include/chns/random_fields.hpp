#pragma once

#include <cstdint>
#include <random>

#include "chns/grid.hpp"

namespace chns {

// Fixed-seed Gaussian trigonometric polynomials. A mode (kx, ky) is populated
// when kx^2 + ky^2 <= kmax^2 (integer wave indices); Nyquist modes never are.
class FieldSampler {
 public:
  explicit FieldSampler(std::uint64_t seed) : rng_(seed) {}

  ScalarField scalar(const Grid& grid, double kmax, bool zero_mean = true);
  // u = (d/dy psi, -d/dx psi) for a random stream function psi; zero mean.
  VelocityField solenoidal(const Grid& grid, double kmax);
  // Unrestricted (generally non-solenoidal) random velocity.
  VelocityField velocity(const Grid& grid, double kmax);

  std::mt19937_64& engine() noexcept { return rng_; }

 private:
  SpectralCoeffs coefficients(const Grid& grid, double kmax, bool zero_mean);
  std::mt19937_64 rng_;
};

// mean + amplitude * g, with g a zero-mean random field of unit RMS.
ScalarField spinodal_field(const Grid& grid, double mean, double amplitude, double kmax,
                           std::uint64_t seed);

// Scales a field to unit L2 norm; zero fields are returned unchanged.
ScalarField normalized(ScalarField f);
VelocityField normalized(VelocityField v);

}  // namespace chns
