/// @file picard.hpp
/// @brief The fixed-point construction Lambda v = v0 - Phi(phi_tilde u (x) v):
///        iteration with contraction diagnostics, multi-start uniqueness
///        probe, and the amplitude threshold scan.
#pragma once

#include <functional>
#include <utility>

#include "nslab/localization.hpp"
#include "nslab/stokes.hpp"

namespace nslab {

struct PicardConfig {
  int max_iters = 100;
  double rel_tolerance = 1e-10;
  double divergence_cap = 1e6;
  bool use_y_norm = false;  // metric X^3 by default; Y = X^3 + X^{3.5} by flag
};

enum class PicardVerdict { converged, diverged, stalled };

std::string to_string(PicardVerdict v);

struct PicardTrace {
  std::vector<double> norms;       // ||v_n|| after each iteration
  std::vector<double> increments;  // d_n = ||v_{n+1} - v_n||
  std::vector<double> ratios;      // rho_n = d_n / d_{n-1} (d_{n-1} > 0 only)
  double residual = 0.0;           // ||vbar - Lambda vbar|| / ||vbar||
  PicardVerdict verdict = PicardVerdict::stalled;
  int iterations = 0;
};

/// Prepared problem: weighted velocity a = phi_tilde u per frame and the
/// source solution v0 (spectral Duhamel of f0, f1 from the localization).
class PicardProblem {
 public:
  PicardProblem(const VectorStack& u, const ScalarStack& p,
                const SampledCutoffs& cut);

  /// Lambda v = v0 - Phi(a (x) v); divergence-free, zero first frame.
  VectorStack apply_lambda(const VectorStack& v) const;

  /// Iteration metric: sup over frames of the weak-L3 norm on the box,
  /// plus the X^{3.5} part when y_norm is set.
  double metric_norm(const VectorStack& v, bool y_norm = false) const;
  double metric_distance(const VectorStack& a, const VectorStack& b,
                         bool y_norm = false) const;

  const VectorStack& v0() const { return v0_; }
  const VectorStack& weighted_u() const { return a_; }
  const GridSpec& grid() const { return a_.grid(); }
  const TimeGrid& time() const { return a_.time; }

 private:
  VectorStack a_;   // phi_tilde u
  VectorStack v0_;
  ScalarField mask_;
};

std::pair<VectorStack, PicardTrace> solve_fixed_point(
    const PicardProblem& prob, const PicardConfig& cfg);

/// Free-standing map for spot checks: v0 and weighted u supplied directly.
VectorStack lambda_map(const VectorStack& v, const VectorStack& weighted_u,
                       const VectorStack& v0);

enum class PicardStart { zero, v0, random };

struct UniquenessReport {
  std::vector<PicardVerdict> verdicts;
  std::vector<double> pairwise_distances;  // metric distances of the limits
  double max_distance = 0.0;               // relative to ||vbar||
  bool all_converged = false;
};

UniquenessReport uniqueness_probe(const PicardProblem& prob,
                                  const PicardConfig& cfg,
                                  const std::vector<PicardStart>& starts);

struct ThresholdScanPoint {
  double amplitude = 0.0;
  double ratio = 0.0;      // max tail contraction ratio
  double weak_norm = 0.0;  // || u ||_{X^3(B_2)} at this amplitude
};

struct ThresholdScanReport {
  std::vector<ThresholdScanPoint> points;
  bool monotone = false;
  double amplitude_star = 0.0;  // ratio crosses 1
  double eps_star = 0.0;        // weak norm at the threshold amplitude
};

/// flow_at(amplitude) must return the (u, p) stacks for that amplitude.
ThresholdScanReport contraction_threshold_scan(
    const std::function<std::pair<VectorStack, ScalarStack>(double)>& flow_at,
    const SampledCutoffs& cut, const std::vector<double>& amplitudes,
    int probe_iters = 8, int bisect_steps = 8);

}  // namespace nslab
