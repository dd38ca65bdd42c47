#pragma once

#include "chns/grid.hpp"

namespace chns {

// Spectral calculus on the periodic square. Every differential operator zeroes
// the Nyquist row and column so derivatives of real fields stay real and the
// first-derivative matrices stay skew-symmetric.

VelocityField grad(const ScalarField& f);
ScalarField div(const VelocityField& v);
ScalarField laplacian(const ScalarField& f);

// L2-orthogonal projection onto divergence-free fields. The mean flow is kept.
VelocityField leray_project(const VelocityField& v);

// Multiplies coefficients by |k|^(2s); the zero mode (and the Nyquist modes)
// map to zero. With `strict` set, inputs whose mean exceeds 1e-12 times their
// L2 norm are rejected with DomainError.
ScalarField bn_power(const ScalarField& f, double s, bool strict = false);

// 2/3-rule truncation.
ScalarField dealias(const ScalarField& f);
VelocityField dealias(const VelocityField& v);

// In-place kernels on coefficient arrays, shared with the time stepper.
namespace spectral {
void dealias(const Grid& grid, std::span<Complex> c);
void leray(const Grid& grid, std::span<Complex> cx, std::span<Complex> cy);
void derivative_x(const Grid& grid, std::span<const Complex> in, std::span<Complex> out);
void derivative_y(const Grid& grid, std::span<const Complex> in, std::span<Complex> out);
// |k|^2 with Nyquist modes set to zero; the symbol of -laplacian.
double k_squared(const Grid& grid, int jx, int jy) noexcept;
// Weighted sum_k w_k |c_k|^2 |k|^(2*order) * area: the squared L2 norm of the
// order-th derivative magnitude (order 0 gives the plain L2 norm squared).
double sobolev_sum(const Grid& grid, std::span<const Complex> c, int order);
}  // namespace spectral

// Inner products and norms. Integrals use the trapezoidal rule on the grid,
// which coincides with the spectral integral of the trigonometric interpolant.
double inner(const ScalarField& f, const ScalarField& g);
double inner(const VelocityField& u, const VelocityField& v);

double mean(const ScalarField& f);
double l2_norm(const ScalarField& f);
double l2_norm(const VelocityField& v);
double h1_seminorm(const ScalarField& f);
double h1_seminorm(const VelocityField& v);
// (sum_k (1 + |k|^2)^2 |c_k|^2 area)^(1/2)
double h2_norm(const ScalarField& f);
// Seminorm ||grad^order f|| computed spectrally (order 2 is ||lap f||).
double sobolev_seminorm(const ScalarField& f, int order);
double spectral_l2_norm(const SpectralCoeffs& c);

// L4 and sup norms are evaluated on a twice-refined grid obtained by spectral
// zero-padding, so the quartic integrand is integrated without aliasing.
double l4_norm(const ScalarField& f);
double l4_norm(const VelocityField& v);
double linf_norm(const ScalarField& f);

// ||A^(-1/2) v||; the mean mode is excluded. Throws DomainError when v is not
// divergence-free.
double dual_norm(const VelocityField& v);

// Divergence residual check relative to ||grad v||.
bool is_solenoidal(const VelocityField& v, double rel_tol = 1e-9);
void require_solenoidal(const VelocityField& v, const char* where);

// Spectral interpolation to a finer grid of the same length.
ScalarField refine(const ScalarField& f, int factor);

}  // namespace chns
