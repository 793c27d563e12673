/// @file stokes.hpp
/// @brief Leray-Helmholtz projection, the Stokes semigroup, the Duhamel
///        operator for tensor forcing, the source solution v0 (spectral and
///        Oseen-kernel-quadrature paths), pressure recovery, and the
///        weighted semigroup-gradient integral probe.
///
/// Spectral conventions: the projection multiplier is I - k k^T/|k|^2 with
/// the first-derivative wavenumbers (Nyquist planes pass through untouched),
/// which keeps the operator real, idempotent, self-adjoint, and annihilates
/// the spectral divergence exactly. The k = 0 mode is left alone.
#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "nslab/grid.hpp"
#include "nslab/spectral.hpp"

namespace nslab {

VectorField leray_project(const VectorField& v);

/// e^{-tA} v = heat flow composed with the projection, t >= 0.
VectorField stokes_semigroup(const VectorField& v, double t);

enum class DuhamelPath { spectral, oseen_quadrature };

struct DuhamelConfig {
  TimeGrid time;
  DuhamelPath path = DuhamelPath::spectral;
  // Oseen-quadrature oracle knobs:
  int oracle_gauss_per_panel = 4;
  std::vector<int> oracle_output_frames;  // required for the oracle path
  // Periodize the sampled kernel over box images so both paths approximate
  // the same (periodic) operator. The lattice sum of the Newtonian far part
  // carries a shape-dependent constant tensor, which is harmless against
  // mean-zero forcing. With periodize = false the oracle evaluates the pure
  // free-space convolution instead (useful for measuring the box surrogate
  // gap, which does not shrink with N).
  bool oracle_periodize = true;
  int oracle_image_shells = 6;  // fold radius for the Newtonian far part
};

/// Phi(F)(t) = int_0^t e^{-(t-tau)A} P div F(tau) dtau with frame data
/// treated as piecewise linear in tau and the exponential integrated
/// exactly (product integration). Output is divergence-free and vanishes
/// at the first frame. Row convention: (div F)_i = d_j F_ij.
VectorStack duhamel_phi(const TensorStack& F, const DuhamelConfig& cfg);

/// Streaming variant: frames of F are produced on demand (memory control).
VectorStack duhamel_phi_stream(
    const GridSpec& g, const TimeGrid& tg,
    const std::function<TensorField(int)>& frame_fn);

/// v0 solving d_t v - lap v + grad q = f0 + div f1, div v = 0, v(t0) = 0.
/// The spectral path runs the product-integration Duhamel recursion with
/// P(f0 + div f1); the Oseen path is available through build_v0_oracle.
VectorStack build_v0(const VectorStack& f0, const TensorStack& f1,
                     const DuhamelConfig& cfg);

/// Streaming variant: forcing frames are produced on demand.
VectorStack build_v0_stream(const GridSpec& g, const TimeGrid& tg,
                            const std::function<VectorField(int)>& f0_fn,
                            const std::function<TensorField(int)>& f1_fn);

struct OracleFrames {
  std::vector<int> frame_index;
  std::vector<VectorField> value;  // on the original grid
};

/// Free-space kernel-quadrature evaluation of v0 at selected frames:
/// the closed-form Oseen tensor is sampled on a zero-padded doubled grid,
/// the convolution is carried out as an exact discrete sum (FFT-accelerated),
/// and the history integral uses Gauss panels aligned with the frame grid.
/// Below s_c (where the sampled kernel core is narrower than a cell) the
/// segment is completed in closed form via the heat multiplier on the
/// padded grid.
OracleFrames build_v0_oracle(const VectorStack& f0, const TensorStack& f1,
                             const DuhamelConfig& cfg);

/// Zero-mean p with -lap p = d_i d_j (u_i u_j), spectrally.
ScalarField pressure_from_velocity(const VectorField& u);

struct YamazakiReport {
  double p = 0.0, q = 0.0, T = 0.0;
  double value = 0.0;        // int_0^T t^{3/2p - 3/2q - 1/2} ||grad e^{-tA}u||_{q,1} dt
  double tail_increment = 0.0;  // additional mass on [T, 2T]
  int n_nodes = 0;
};

/// Requires 1 < p <= q < inf and mean-zero u. Product integration against
/// the singular t^alpha weight on a graded ladder.
YamazakiReport yamazaki_probe(const VectorField& u, double p, double q,
                              double T);

}  // namespace nslab
