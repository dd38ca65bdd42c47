#include "chns/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "chns/error.hpp"

namespace chns {

Grid::Grid(int nx, int ny, double length) : nx_(nx), ny_(ny), length_(length) {
  if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0) {
    throw DomainError("grid dimensions must be even and >= 8, got " + std::to_string(nx) + "x" +
                      std::to_string(ny));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError("grid length must be positive and finite");
  }
}

double Grid::wavenumber(int signed_index) const noexcept {
  return 2.0 * std::numbers::pi * signed_index / length_;
}

bool Grid::keeps_mode(int jx, int jy) const noexcept {
  const int ax = std::abs(wave_x(jx));
  const int ay = std::abs(wave_y(jy));
  return 3 * ax < nx_ && 3 * ay < ny_;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) {
    throw DimensionError(std::string(where) + ": grid mismatch");
  }
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw DimensionError("ScalarField: expected " + std::to_string(grid_.size()) + " values, got " +
                         std::to_string(values_.size()));
  }
}

bool ScalarField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField::operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField::operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

VelocityField::VelocityField(const Grid& grid) : ux_(grid), uy_(grid) {}

VelocityField::VelocityField(ScalarField ux, ScalarField uy) : ux_(std::move(ux)), uy_(std::move(uy)) {
  require_same_grid(ux_.grid(), uy_.grid(), "VelocityField");
}

VelocityField& VelocityField::operator+=(const VelocityField& other) {
  ux_ += other.ux_;
  uy_ += other.uy_;
  return *this;
}

VelocityField& VelocityField::operator-=(const VelocityField& other) {
  ux_ -= other.ux_;
  uy_ -= other.uy_;
  return *this;
}

VelocityField& VelocityField::operator*=(double s) noexcept {
  ux_ *= s;
  uy_ *= s;
  return *this;
}

VelocityField operator+(VelocityField a, const VelocityField& b) { return a += b; }
VelocityField operator-(VelocityField a, const VelocityField& b) { return a -= b; }
VelocityField operator*(double s, VelocityField a) { return a *= s; }

SpectralCoeffs::SpectralCoeffs(const Grid& grid) : grid_(grid), data_(grid.spectral_size()) {}

Complex SpectralCoeffs::mode(int kx, int ky) const {
  const int nx = grid_.nx();
  const int ny = grid_.ny();
  if (kx < -nx / 2 || kx > nx / 2 || ky < -ny / 2 || ky > ny / 2) {
    throw DomainError("SpectralCoeffs::mode: wave index out of range");
  }
  const auto row = [ny](int k) { return ((k % ny) + ny) % ny; };
  if (kx >= 0) return at(kx, row(ky));
  return std::conj(at(-kx, row(-ky)));
}

// ---------------------------------------------------------------------------
// FFTW plans are created once per grid shape. Planning is not thread-safe, so
// the cache is guarded; execution through the new-array interface is.

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~PlanPair() {
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

const PlanPair& plans_for(int nx, int ny) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{nx, ny}];
  if (!slot) {
    auto pair = std::make_unique<PlanPair>();
    std::vector<double> real(static_cast<std::size_t>(nx) * ny);
    std::vector<Complex> spec(static_cast<std::size_t>(nx / 2 + 1) * ny);
    auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
    // FFTW_ESTIMATE keeps the chosen algorithm, and therefore the round-off,
    // identical from run to run.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    pair->forward = fftw_plan_dft_r2c_2d(ny, nx, real.data(), cplx, flags);
    pair->inverse = fftw_plan_dft_c2r_2d(ny, nx, cplx, real.data(), flags);
    if (!pair->forward || !pair->inverse) throw Error("FFTW planning failed");
    slot = std::move(pair);
  }
  return *slot;
}

}  // namespace

void forward_transform(const Grid& grid, std::span<const double> in, std::span<Complex> out) {
  if (in.size() != grid.size() || out.size() != grid.spectral_size()) {
    throw DimensionError("forward_transform: buffer size mismatch");
  }
  const auto& p = plans_for(grid.nx(), grid.ny());
  fftw_execute_dft_r2c(p.forward, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : out) c *= scale;
}

void inverse_transform(const Grid& grid, std::span<const Complex> in, std::span<double> out,
                       std::span<Complex> scratch) {
  if (in.size() != grid.spectral_size() || scratch.size() != grid.spectral_size() ||
      out.size() != grid.size()) {
    throw DimensionError("inverse_transform: buffer size mismatch");
  }
  // c2r overwrites its input.
  std::copy(in.begin(), in.end(), scratch.begin());
  const auto& p = plans_for(grid.nx(), grid.ny());
  fftw_execute_dft_c2r(p.inverse, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

SpectralCoeffs to_spectral(const ScalarField& f) {
  SpectralCoeffs c(f.grid());
  forward_transform(f.grid(), f.values(), c.data());
  return c;
}

ScalarField to_physical(const SpectralCoeffs& c) {
  ScalarField f(c.grid());
  std::vector<Complex> scratch(c.grid().spectral_size());
  inverse_transform(c.grid(), c.data(), f.values(), scratch);
  return f;
}

}  // namespace chns
