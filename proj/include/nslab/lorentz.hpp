/// @file lorentz.hpp
/// @brief Decreasing rearrangements and Lorentz L^{q,r} norms of the
///        piecewise-constant cell representative, plus mixed space-time
///        norms L^s(t; L^{q,r}(mask)).
///
/// Convention: with f* the decreasing rearrangement,
///   ||f||_{q,r} = ( (r/q) int_0^inf [t^{1/q} f*(t)]^r dt/t )^{1/r},
///   ||f||_{q,inf} = sup_t t^{1/q} f*(t).
/// The (r/q) factor normalizes indicator functions to measure^{1/q} for every
/// r, gives || . ||_{q,q} = || . ||_{L^q} exactly, and makes the nesting
/// ||f||_{q,inf} <= ||f||_{q,r} <= ||f||_{q,1} hold with constant one.
/// On plateaus of the cell representative all integrals are evaluated in
/// closed form, so values are exact up to roundoff.
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "nslab/grid.hpp"

namespace nslab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct RearrangementProfile {
  std::vector<double> magnitude;  // non-increasing
  std::vector<double> volume;     // cumulative, V_k = k * h^3
  double cell_volume = 0.0;
  double total_volume = 0.0;      // masked-region volume
};

/// Exact rearrangement over the cells selected by mask (mask != 0).
/// Ties are broken by linear node index, so the profile is deterministic.
RearrangementProfile rearrange(const ScalarField& f, const ScalarField& mask);

struct LorentzNormResult {
  double q = 0.0;
  double r = 0.0;
  double value = 0.0;
  double attaining_level = 0.0;     // magnitude at the attaining plateau
  std::size_t attaining_index = 0;  // k index (weak norms)
};

/// Lorentz norm of |f| over the mask; q in (1, inf], r in [1, inf].
/// q <= 1 is rejected. q = inf requires r = inf (the sup norm).
LorentzNormResult lorentz_norm(const ScalarField& f, const ScalarField& mask,
                               double q, double r);
LorentzNormResult lorentz_norm(const RearrangementProfile& prof, double q,
                               double r);

template <int C>
LorentzNormResult lorentz_norm(const Field<C>& f, const ScalarField& mask,
                               double q, double r) {
  return lorentz_norm(magnitude(f), mask, q, r);
}

struct MixedNormResult {
  double s = 0.0;
  double q = 0.0;
  double r = 0.0;
  double value = 0.0;
  std::vector<double> frame_values;
};

/// L^s in time (trapezoid on the frame norms, max for s = inf) of the
/// per-frame Lorentz norms.
template <int C>
MixedNormResult mixed_norm(const SpaceTimeField<C>& f, const ScalarField& mask,
                           double s, double q, double r);

/// Weak-norm oracle: sup over a dense lambda grid of
/// lambda * vol{|f| > lambda}^{1/q}. Exact on step functions when the scan
/// includes every distinct magnitude, which this implementation does.
double weak_norm_lambda_scan(const ScalarField& f, const ScalarField& mask,
                             double q);

struct WeakScalingReport {
  double norm_f = 0.0;
  double norm_scaled = 0.0;
  double ratio = 0.0;
};

/// Compares ||f||_{3,inf} on its own grid with ||lambda f(lambda .)|| on the
/// consistently rescaled grid (same N, box side L/lambda). The continuum
/// ratio is exactly 1; on rescaled grids it is 1 up to roundoff because
/// superlevel volumes scale cell by cell.
WeakScalingReport weak_scaling_check(
    const ScalarField& f, double lambda,
    const std::function<double(Vec3)>& closed_form);

}  // namespace nslab
