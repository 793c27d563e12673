/// @file localization.hpp
/// @brief The cut-off pipeline: correction potential eta, localized pair
///        (u_tilde, p_tilde), and the forcing terms f0, f1, f2.
///
/// With phi = theta(t) phi0(x) and the outer cut-off phi_tilde:
///   u_tilde = phi u + grad eta,   eta = Newtonian potential of grad phi . u
///   p_tilde = phi p - d_t eta + lap eta
///   f0      = u (phi_t + lap phi) + p grad phi + (grad phi . u) u
///   f1_ij   = -2 (d_j phi) u_i + (d_j eta) phi_tilde u_i
///   f2_ij(v)= -phi_tilde u_i v_j
/// d_t eta uses centered time differences (second-order one-sided at the
/// ends); it enters only p_tilde, never the fixed-point map.
#pragma once

#include "nslab/cutoffs.hpp"
#include "nslab/grid.hpp"

namespace nslab {

/// Cut-off profiles sampled once per grid (theta factors applied per frame).
struct SampledCutoffs {
  ScalarField phi0;
  VectorField grad_phi0;
  ScalarField lap_phi0;
  ScalarField phi_tilde;
  CutoffFamily family;

  explicit SampledCutoffs(const GridSpec& g, const CutoffFamily& cut = {});
};

struct LocalizedState {
  VectorStack utilde;
  ScalarStack eta;
  ScalarStack ptilde;
  VectorStack f0;
  TensorStack f1;
};

/// Per-frame Newtonian potential of grad phi . u. The source is div(phi u)
/// for solenoidal u, hence mean-zero; the residual mean is validated.
ScalarStack eta_correction(const VectorStack& u, const SampledCutoffs& cut,
                           double rel_mean_tol = 1e-8);

/// Full localized state. Requires at least 8 frames (for d_t eta).
LocalizedState localize(const VectorStack& u, const ScalarStack& p,
                        const SampledCutoffs& cut);

/// f0 and f1 for a single frame (streaming interface; eta frame supplied).
VectorField f0_frame(const VectorField& u_m, const ScalarField& p_m, double t,
                     const SampledCutoffs& cut);
TensorField f1_frame(const VectorField& u_m, const ScalarField& eta_m, double t,
                     const SampledCutoffs& cut);

/// f2(v) for one frame: -phi_tilde u_i v_j (bilinear in (u, v)).
TensorField f2_frame(const VectorField& u_m, const VectorField& v_m,
                     const SampledCutoffs& cut);

struct SupportAuditReport {
  double support_radius = 1.5;
  double max_f0_outside = 0.0;
  double max_f1_outside = 0.0;
  double f0_l1_linf_m_norm = 0.0;  // || f0 ||_{L^m(t; L^1 cap L^{3/2,inf})}
  double m_exponent = 3.0;
  bool pass = false;
};

/// Verifies supp f0, supp f1 inside B_{3/2} (exact zeros expected outside)
/// and reports the mixed norm of f0.
SupportAuditReport forcing_support_audit(const LocalizedState& state,
                                         double m_exponent = 3.0);

}  // namespace nslab
