/// @file spectral.hpp
/// @brief FFT-backed spectral calculus on periodic box fields: derivatives,
///        Laplacians, Poisson solves and trigonometric resampling.
///
/// Forward transform is the plain DFT sum (FFTW sign convention), inverse
/// divides by N^3. First-derivative multipliers zero the Nyquist plane so
/// that real fields map to real fields and odd symmetry is preserved.
#pragma once

#include <complex>
#include <vector>

#include "nslab/grid.hpp"

namespace nslab {

using Complex = std::complex<double>;

/// Raw 3D transforms; `data` uses the Field node layout (i-major).
void fft_forward(int n, const double* in, Complex* out);
void fft_inverse(int n, const Complex* in, double* out);
void fft_forward_c(int n, Complex* inout);  // in-place
void fft_inverse_c(int n, Complex* inout);  // in-place, includes 1/N^3

/// Signed wavenumber 2*pi*s(n)/L with s(n) = n for n < N/2, n - N for n >= N/2.
double wavenumber(const GridSpec& g, int n);
/// As above but the Nyquist entry reports 0 (first-derivative convention).
double wavenumber_deriv(const GridSpec& g, int n);

template <int C>
std::vector<Complex> to_spectrum(const Field<C>& f);  // C * N^3 complex
template <int C>
Field<C> from_spectrum(const GridSpec& g, const std::vector<Complex>& hat);

// ---- spectral calculus ----------------------------------------------------

template <int C>
Field<C> derivative(const Field<C>& f, int axis);

enum class DiffOp { grad, div, curl, laplacian };

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& f);
VectorField curl(const VectorField& f);
template <int C>
Field<C> laplacian(const Field<C>& f);

double field_mean(const ScalarField& f);

/// Solves -lap(u) = source with the zero-mean gauge. The source must be
/// mean-zero; the residual mean (relative to mean |source|) is checked
/// against `rel_mean_tol` and reported in the error message on failure.
ScalarField solve_poisson_neg(const ScalarField& source,
                              double rel_mean_tol = 1e-8);

/// Heat semigroup e^{t lap} as a Fourier multiplier (t >= 0).
template <int C>
Field<C> heat_semigroup(const Field<C>& f, double t);

/// Value of the trigonometric interpolant at an arbitrary point (slow; for
/// spot checks and trilinear comparison only).
double trig_eval(const ScalarField& f, Vec3 x);

}  // namespace nslab
