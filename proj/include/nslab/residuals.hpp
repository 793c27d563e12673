/// @file residuals.hpp
/// @brief Weak-form, very-weak-form and divergence residual checkers with
///        reproducible test-function batteries.
///
/// Two evaluation backends:
///  - analytic: for polynomial flows the weak form is evaluated after exact
///    integration by parts, reducing every term to 1D profile moments times
///    closed-form angular moments (machine-accurate quadrature);
///  - grid: for discrete space-time stacks the literal integrand is
///    evaluated by the rectangle rule in x and composite Simpson in t.
#pragma once

#include <string>
#include <vector>

#include "nslab/flows.hpp"
#include "nslab/grid.hpp"

namespace nslab {

/// One test function: zeta(x,t) = w(t) q(|x-c|) e_d, or its solenoidal
/// variant zeta = w(t) grad q x e_d (exactly divergence-free).
struct ZetaSpec {
  Vec3 center;
  double scale = 0.4;   // support radius of the radial bump
  int direction = 0;    // e_d
  bool curl = false;    // true: solenoidal variant
  double t_on = 0.1, t_full = 0.3, t_down = 0.6, t_off = 0.9;
};

struct Battery {
  std::string id;
  std::vector<ZetaSpec> members;
};

/// Smoothstep bumps: scales {0.2, 0.4, 0.8}, centers on a lattice inside
/// B_1, cycling directions and time windows; size >= 21.
Battery make_weak_battery();
/// Same layout, curl variant (divergence-free members).
Battery make_solenoidal_battery();

/// Members whose support spans at least min_cells grid cells; the grid
/// backend rejects anything finer (a sub-cell bump has no meaningful
/// sampled representative).
Battery resolved_subset(const Battery& b, const GridSpec& g,
                        double min_cells = 3.0);

struct PhiSpec {
  Vec3 center;
  double scale = 0.5;
};

std::vector<PhiSpec> make_scalar_battery();

struct ResidualReport {
  std::string flow;
  std::string battery_id;
  std::vector<double> residuals;   // normalized: |sum| / max term scale
  std::vector<double> raw;         // |sum of weak-form terms|
  double tol = 0.0;
  bool pass = false;
};

/// Weak form (dis.sol.1) for a polynomial flow; requires flow.poly and the
/// pressure terms present.
ResidualReport weak_residual(const TestFlow& flow, const Battery& battery,
                             double tol);

/// Very weak form: solenoidal battery, no pressure term. Throws if a member
/// is not of the curl (divergence-free) variant.
ResidualReport very_weak_residual(const TestFlow& flow,
                                  const Battery& battery, double tol);

/// As above, with a sign flip on the nonlinear term (constructed
/// counterexamples for failing tests). Gradient flows u = g grad(h) have a
/// gradient nonlinearity, invisible to solenoidal test functions, so the
/// very-weak flip only bites for non-gradient fields; the weak flip bites
/// for any flow with a nontrivial nonlinearity.
ResidualReport weak_residual_flipped(const TestFlow& flow,
                                     const Battery& battery, double tol);
ResidualReport very_weak_residual_flipped(const TestFlow& flow,
                                          const Battery& battery, double tol);

/// Weak residual with the time derivative left on the test function and the
/// frame values combined by composite Simpson (space integrals exact): for
/// an exact polynomial flow the result is pure time-rule error, which is
/// what the time-refinement order studies measure.
ResidualReport weak_residual_time_rule(const TestFlow& flow,
                                       const Battery& battery, int steps,
                                       double tol);

/// Grid backend on discrete stacks (rectangle x Simpson quadrature).
ResidualReport weak_residual_grid(const VectorStack& u, const ScalarStack& p,
                                  const Battery& battery, double tol);
ResidualReport very_weak_residual_grid(const VectorStack& u,
                                       const Battery& battery, double tol);

/// int u . grad(phi) dx per frame and per test function; grad is the
/// spectral derivative of the sampled phi, so discretely projected fields
/// give exact zeros (up to roundoff).
struct DivergenceResidualReport {
  std::vector<std::vector<double>> residuals;  // [phi][frame]
  double max_abs = 0.0;
};
DivergenceResidualReport divergence_residual(const VectorStack& u,
                                             const std::vector<PhiSpec>& phis);

/// Symmetry-breaking scalar battery (generic off-axis centers) for weak
/// divergence measurements of fields with axis symmetries.
std::vector<PhiSpec> make_offaxis_scalar_battery();

/// Weak residual of the forced system d_t v - lap v + grad q = f0 + div F
/// against a (plain-bump) battery: per member,
///   int int [ v.(-d_t zeta - lap zeta) - q div zeta - f0.zeta + F:grad zeta ].
/// F frames are produced on demand (they may depend on v).
ResidualReport forced_system_weak_residual(
    const VectorStack& v, const ScalarStack& q, const VectorStack& f0,
    const std::function<TensorField(int)>& F_fn, const Battery& battery,
    double tol);

}  // namespace nslab
