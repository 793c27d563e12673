/// @file kernels.hpp
/// @brief Heat kernel, Newtonian potential of the Gaussian, the Oseen tensor
///        and its space/time derivatives in closed form, a radial-quadrature
///        oracle for cross-checks, and empirical decay scans.
///
/// Closed forms are built from the radial potential
///   psi(r,t) = erf(rho) / (4 pi r),  rho = r / (2 sqrt(t)),
/// which satisfies -lap(psi) = Gamma. Near rho = 0 the combinations below
/// cancel catastrophically, so each profile switches to its power series.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "nslab/geometry.hpp"
#include "nslab/grid.hpp"

namespace nslab {

class KernelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class KernelMethod { closed_form, quadrature_oracle };

struct KernelSample {
  Vec3 x;
  double t = 0.0;
  int i = 0, j = 0;
  double value = 0.0;
  KernelMethod method = KernelMethod::closed_form;
};

/// Gamma(x,t) = (4 pi t)^{-3/2} exp(-|x|^2 / 4t), t > 0.
double heat_kernel(Vec3 x, double t);
double heat_kernel_radial(double r, double t);

/// psi(r,t) above; the r -> 0 limit is returned at r = 0.
double gaussian_potential(double r, double t);

/// Oseen tensor S_ij = Gamma delta_ij + d_i d_j psi(|x|, t), closed form.
/// Continuous at x = 0 (isotropic limit 2/3 Gamma(0,t) delta_ij).
Mat3 oseen_tensor(Vec3 x, double t);

/// Independent evaluation: radial quadrature of the Newtonian potential of
/// Gamma followed by Richardson finite differences.
Mat3 oseen_tensor_oracle(Vec3 x, double t);

/// Spatial gradient d_k S_ij (closed form); result[k](i,j).
std::array<Mat3, 3> oseen_gradient(Vec3 x, double t);

/// d_t S_ij = d_t Gamma delta_ij - d_i d_j Gamma (closed form).
Mat3 oseen_time_derivative(Vec3 x, double t);

/// d_k d_t S_ij; result[k](i,j).
std::array<Mat3, 3> oseen_gradient_time_derivative(Vec3 x, double t);

struct DecaySampleSpec {
  double r_lo = 0.1, r_hi = 10.0;
  int n_r = 32;
  double t_lo = 1e-3, t_hi = 10.0;
  int n_t = 32;
  int n_dir = 6;  // <= 6 fixed directions
};

struct DecayScanReport {
  int l = 0, k = 0;
  int weight_exponent = 0;   // 3 + l + 2k
  double C_emp = 0.0;
  int n_samples = 0;
  double stability_pct = 0.0;  // change under sample doubling
  bool stable = false;         // within 10%
};

/// Empirical constant sup |D^l d_t^k S| (|x| + sqrt(t))^{3+l+2k} over a
/// log-uniform sample set; l, k in {0, 1}.
DecayScanReport decay_scan(int l, int k, const DecaySampleSpec& spec);

/// Periodic Newtonian potential: solves -lap(out) = source with zero-mean
/// gauge (spectral). The source must be mean-zero; rejected otherwise with
/// the residual mean reported.
ScalarField newtonian_potential(const ScalarField& source,
                                double rel_mean_tol = 1e-8);

/// Quadrature check of Gamma(.,t) * Gamma(.,s) = Gamma(., t+s) at radius r:
/// returns the convolution value computed by radial quadrature.
double heat_semigroup_convolution_oracle(double r, double t, double s);

/// Shell-averaged magnitudes of |grad eta| and a log-log power fit on
/// r in [r_lo, r_hi]; used for far-field decay measurements.
struct PowerFit {
  double exponent = 0.0;
  double prefactor = 0.0;   // fit |f| ~ prefactor * r^exponent
  std::vector<double> shell_r;
  std::vector<double> shell_value;
};
PowerFit fit_radial_decay(const VectorField& f, double r_lo, double r_hi,
                          int n_shells = 10);

}  // namespace nslab
