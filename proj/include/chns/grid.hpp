#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace chns {

using Complex = std::complex<double>;

// Uniform nx-by-ny grid on the periodic square [0, L)^2.
//
// Physical arrays are row-major with y as the slow index: value(ix, iy) lives
// at iy * nx + ix. Spectral arrays hold the r2c half spectrum, ny rows of
// nx/2 + 1 complex coefficients; row jy maps to the signed wave index
// jy <= ny/2 ? jy : jy - ny.
class Grid {
 public:
  Grid(int nx, int ny, double length);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double length() const noexcept { return length_; }

  std::size_t size() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }
  int half_nx() const noexcept { return nx_ / 2 + 1; }
  std::size_t spectral_size() const noexcept {
    return static_cast<std::size_t>(half_nx()) * ny_;
  }

  double dx() const noexcept { return length_ / nx_; }
  double dy() const noexcept { return length_ / ny_; }
  double area() const noexcept { return length_ * length_; }
  double cell_area() const noexcept { return dx() * dy(); }
  double x(int ix) const noexcept { return ix * dx(); }
  double y(int iy) const noexcept { return iy * dy(); }

  // Signed integer wave indices of a half-spectrum slot.
  int wave_x(int jx) const noexcept { return jx; }
  int wave_y(int jy) const noexcept { return jy <= ny_ / 2 ? jy : jy - ny_; }

  // Angular wavenumber 2*pi*j/L for a signed index.
  double wavenumber(int signed_index) const noexcept;

  bool is_nyquist(int jx, int jy) const noexcept { return jx == nx_ / 2 || jy == ny_ / 2; }

  // 2/3-rule: true when the mode survives dealiasing.
  bool keeps_mode(int jx, int jy) const noexcept;

  // Multiplicity of a half-spectrum slot in the full spectrum (Parseval weight).
  double parseval_weight(int jx) const noexcept {
    return (jx == 0 || jx == nx_ / 2) ? 1.0 : 2.0;
  }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.length_ == b.length_;
  }

 private:
  int nx_;
  int ny_;
  double length_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* where);

class ScalarField {
 public:
  explicit ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator()(int ix, int iy) { return values_[static_cast<std::size_t>(iy) * grid_.nx() + ix]; }
  double operator()(int ix, int iy) const {
    return values_[static_cast<std::size_t>(iy) * grid_.nx() + ix];
  }

  bool all_finite() const noexcept;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s) noexcept;

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

class VelocityField {
 public:
  explicit VelocityField(const Grid& grid);
  VelocityField(ScalarField ux, ScalarField uy);

  const Grid& grid() const noexcept { return ux_.grid(); }
  ScalarField& x() noexcept { return ux_; }
  ScalarField& y() noexcept { return uy_; }
  const ScalarField& x() const noexcept { return ux_; }
  const ScalarField& y() const noexcept { return uy_; }

  bool all_finite() const noexcept { return ux_.all_finite() && uy_.all_finite(); }

  VelocityField& operator+=(const VelocityField& other);
  VelocityField& operator-=(const VelocityField& other);
  VelocityField& operator*=(double s) noexcept;

 private:
  ScalarField ux_;
  ScalarField uy_;
};

VelocityField operator+(VelocityField a, const VelocityField& b);
VelocityField operator-(VelocityField a, const VelocityField& b);
VelocityField operator*(double s, VelocityField a);

// Fourier coefficients normalized so that f(x) = sum_k c_k exp(i k.x); the
// zero mode of a constant field equals that constant.
class SpectralCoeffs {
 public:
  explicit SpectralCoeffs(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }
  Complex& at(int jx, int jy) { return data_[static_cast<std::size_t>(jy) * grid_.half_nx() + jx]; }
  Complex at(int jx, int jy) const {
    return data_[static_cast<std::size_t>(jy) * grid_.half_nx() + jx];
  }

  // Coefficient of any signed mode (kx, ky), using conjugate symmetry for kx < 0.
  Complex mode(int kx, int ky) const;

 private:
  Grid grid_;
  std::vector<Complex> data_;
};

SpectralCoeffs to_spectral(const ScalarField& f);
ScalarField to_physical(const SpectralCoeffs& c);

// Raw-buffer transforms used by the time stepper. `out` must hold
// grid.spectral_size() (forward) or grid.size() (inverse) entries.
void forward_transform(const Grid& grid, std::span<const double> in, std::span<Complex> out);
void inverse_transform(const Grid& grid, std::span<const Complex> in, std::span<double> out,
                       std::span<Complex> scratch);

}  // namespace chns
