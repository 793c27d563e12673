/// @file cutoffs.hpp
/// @brief Smooth cut-off profiles: the exp(-1/s) smoothstep with analytic
///        first and second derivatives, radial plateau cut-offs, and the
///        localization family (time cut-off theta, space cut-offs phi0 and
///        phi_tilde).
#pragma once

#include "nslab/geometry.hpp"

namespace nslab {

/// psi(s) = a(s) / (a(s) + a(1-s)) with a(s) = exp(-1/s) for s > 0.
/// psi = 0 for s <= 0, psi = 1 for s >= 1, C-infinity in between.
double smoothstep(double s);
double smoothstep_d1(double s);
double smoothstep_d2(double s);

/// Radial profile equal to 1 for r <= r_inner, 0 for r >= r_outer.
struct RadialCutoff {
  double r_inner = 1.0;
  double r_outer = 1.25;

  double value(double r) const;
  double d1(double r) const;  // d/dr
  double d2(double r) const;  // d^2/dr^2

  /// Gradient and Laplacian of the induced radial function of x.
  Vec3 gradient(Vec3 x) const;
  double laplacian(Vec3 x) const;
};

/// Scalar bump rising on [t_on, t_full]: 0 below t_on, 1 above t_full.
struct TimeCutoff {
  double t_on = 0.05;
  double t_full = 0.1;

  double value(double t) const;
  double d1(double t) const;
};

/// The localization family: phi(x,t) = theta(t) phi0(x), outer phi_tilde.
/// Plateaus: theta = 1 on [0.1, 1], theta = 0 for t <= 1/20; phi0 = 1 on B_1,
/// 0 outside B_{5/4}; phi_tilde = 1 on B_{5/4}, 0 outside B_{3/2}.
struct CutoffFamily {
  TimeCutoff theta{0.05, 0.1};
  RadialCutoff phi0{1.0, 1.25};
  RadialCutoff phi_tilde{1.25, 1.5};

  double phi(Vec3 x, double t) const {
    return theta.value(t) * phi0.value(x.norm());
  }
  double phi_t(Vec3 x, double t) const {
    return theta.d1(t) * phi0.value(x.norm());
  }
  Vec3 grad_phi(Vec3 x, double t) const {
    return theta.value(t) * phi0.gradient(x);
  }
  double lap_phi(Vec3 x, double t) const {
    return theta.value(t) * phi0.laplacian(x);
  }
};

}  // namespace nslab
