#include "nslab/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nslab/kernels.hpp"
#include "nslab/lorentz.hpp"

namespace nslab {

namespace {

struct ModeTables {
  int n = 0;
  std::vector<double> kd;  // derivative wavenumbers (Nyquist -> 0)
  std::vector<double> kf;  // full wavenumbers (for |k|^2)

  explicit ModeTables(const GridSpec& g) : n(g.points_per_axis) {
    kd.resize(n);
    kf.resize(n);
    for (int m = 0; m < n; ++m) {
      kd[m] = wavenumber_deriv(g, m);
      kf[m] = wavenumber(g, m);
    }
  }
};

// In-place projection of a 3-component spectrum (kd convention).
void project_hat(const ModeTables& mt, std::vector<Complex>* hat) {
  int n = mt.n;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) {
        double kx = mt.kd[i], ky = mt.kd[j], kz = mt.kd[k];
        double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 == 0.0) continue;
        Complex dot = (kx * hat[0][idx] + ky * hat[1][idx] + kz * hat[2][idx]) /
                      k2;
        hat[0][idx] -= kx * dot;
        hat[1][idx] -= ky * dot;
        hat[2][idx] -= kz * dot;
      }
}

// Product-integration weights over one interval of width dt for mode z =
// |k|^2 dt: contribution = alpha * G_older + beta * G_newer, and the carried
// history is damped by exp(-z).
void interval_weights(double z, double dt, double* alpha, double* beta) {
  if (z < 1e-4) {
    *alpha = dt * (0.5 - z / 3.0 + z * z / 8.0);
    *beta = dt * (0.5 - z / 6.0 + z * z / 24.0);
    return;
  }
  double e = std::exp(-z);
  *alpha = dt * (1.0 - (1.0 + z) * e) / (z * z);
  *beta = dt * ((z - 1.0) + e) / (z * z);
}

using SourceHatFn = std::function<void(int, std::vector<Complex>*)>;

// Shared engine: out(t_m) = int_{t_0}^{t_m} e^{-(t_m - tau) |k|^2} Ghat(tau),
// with Ghat piecewise linear between frames. Ghat frames must already be
// projected (or otherwise ready).
VectorStack spectral_duhamel(const GridSpec& g, const TimeGrid& tg,
                             const SourceHatFn& source_hat) {
  ModeTables mt(g);
  int n = mt.n;
  std::size_t npts = g.point_count();
  double dt = tg.dt();

  std::vector<double> damp(npts), wa(npts), wb(npts);
  {
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k, ++idx) {
          double kx = mt.kf[i], ky = mt.kf[j], kz = mt.kf[k];
          double k2 = kx * kx + ky * ky + kz * kz;
          double z = k2 * dt;
          damp[idx] = std::exp(-z);
          interval_weights(z, dt, &wa[idx], &wb[idx]);
        }
  }

  VectorStack out(tg, g);
  std::vector<Complex> J[3], Gprev[3], Gcur[3];
  for (int c = 0; c < 3; ++c) {
    J[c].assign(npts, Complex(0.0, 0.0));
    Gprev[c].assign(npts, Complex(0.0, 0.0));
    Gcur[c].assign(npts, Complex(0.0, 0.0));
  }
  source_hat(0, Gprev);
  // frame 0 output is zero by construction
  for (int m = 1; m < tg.nodes(); ++m) {
    source_hat(m, Gcur);
    for (int c = 0; c < 3; ++c) {
      for (std::size_t p = 0; p < npts; ++p)
        J[c][p] = damp[p] * J[c][p] + wa[p] * Gprev[c][p] + wb[p] * Gcur[c][p];
      fft_inverse(n, J[c].data(), out.frames[m].component(c));
      std::swap(Gprev[c], Gcur[c]);
    }
  }
  return out;
}

// Ghat = P(i kd . Fhat) for one tensor frame.
void tensor_divergence_hat(const ModeTables& mt, const TensorField& F,
                           std::vector<Complex>* Ghat) {
  int n = mt.n;
  std::size_t npts = F.grid().point_count();
  std::vector<Complex> fhat(npts);
  for (int c = 0; c < 3; ++c)
    std::fill(Ghat[c].begin(), Ghat[c].end(), Complex(0.0, 0.0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      fft_forward(n, F.component(3 * i + j), fhat.data());
      std::size_t idx = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c, ++idx) {
            double kj = (j == 0) ? mt.kd[a] : (j == 1) ? mt.kd[b] : mt.kd[c];
            Ghat[i][idx] += Complex(0.0, kj) * fhat[idx];
          }
    }
  project_hat(mt, Ghat);
}

}  // namespace

VectorField leray_project(const VectorField& v) {
  const GridSpec& g = v.grid();
  ModeTables mt(g);
  int n = g.points_per_axis;
  std::size_t npts = g.point_count();
  std::vector<Complex> hat[3];
  for (int c = 0; c < 3; ++c) {
    hat[c].resize(npts);
    fft_forward(n, v.component(c), hat[c].data());
  }
  project_hat(mt, hat);
  VectorField out(g);
  for (int c = 0; c < 3; ++c) fft_inverse(n, hat[c].data(), out.component(c));
  return out;
}

VectorField stokes_semigroup(const VectorField& v, double t) {
  if (t < 0.0) throw GridError("stokes_semigroup: t must be >= 0");
  const GridSpec& g = v.grid();
  ModeTables mt(g);
  int n = g.points_per_axis;
  std::size_t npts = g.point_count();
  std::vector<Complex> hat[3];
  for (int c = 0; c < 3; ++c) {
    hat[c].resize(npts);
    fft_forward(n, v.component(c), hat[c].data());
  }
  project_hat(mt, hat);
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) {
        double kx = mt.kf[i], ky = mt.kf[j], kz = mt.kf[k];
        double damp = std::exp(-(kx * kx + ky * ky + kz * kz) * t);
        for (int c = 0; c < 3; ++c) hat[c][idx] *= damp;
      }
  VectorField out(g);
  for (int c = 0; c < 3; ++c) fft_inverse(n, hat[c].data(), out.component(c));
  return out;
}

VectorStack duhamel_phi(const TensorStack& F, const DuhamelConfig& cfg) {
  F.validate();
  if (!(F.time == cfg.time))
    throw GridError("duhamel_phi: time grid mismatch between F and config");
  return duhamel_phi_stream(F.grid(), cfg.time,
                            [&](int m) { return F.frames[m]; });
}

VectorStack duhamel_phi_stream(
    const GridSpec& g, const TimeGrid& tg,
    const std::function<TensorField(int)>& frame_fn) {
  ModeTables mt(g);
  return spectral_duhamel(g, tg, [&](int m, std::vector<Complex>* Ghat) {
    TensorField F = frame_fn(m);
    if (!(F.grid() == g)) throw GridError("duhamel_phi: frame grid mismatch");
    tensor_divergence_hat(mt, F, Ghat);
  });
}

VectorStack build_v0(const VectorStack& f0, const TensorStack& f1,
                     const DuhamelConfig& cfg) {
  f0.validate();
  f1.validate();
  if (!(f0.time == cfg.time) || !(f1.time == cfg.time))
    throw GridError("build_v0: time grid mismatch");
  if (!(f1.grid() == f0.grid())) throw GridError("build_v0: grid mismatch");
  return build_v0_stream(
      f0.grid(), cfg.time, [&](int m) { return f0.frames[m]; },
      [&](int m) { return f1.frames[m]; });
}

VectorStack build_v0_stream(const GridSpec& g, const TimeGrid& tg,
                            const std::function<VectorField(int)>& f0_fn,
                            const std::function<TensorField(int)>& f1_fn) {
  ModeTables mt(g);
  int n = g.points_per_axis;
  std::size_t npts = g.point_count();
  return spectral_duhamel(g, tg, [&](int m, std::vector<Complex>* Ghat) {
    tensor_divergence_hat(mt, f1_fn(m), Ghat);
    VectorField f0m = f0_fn(m);
    std::vector<Complex> fhat(npts);
    for (int c = 0; c < 3; ++c) {
      fft_forward(n, f0m.component(c), fhat.data());
      for (std::size_t p = 0; p < npts; ++p) Ghat[c][p] += fhat[p];
    }
    project_hat(mt, Ghat);  // idempotent on the f1 part
  });
}

// ---- Oseen kernel-quadrature oracle ---------------------------------------

namespace {

// Gauss-Legendre nodes/weights on [0, 1].
void gauss_rule(int n, std::vector<double>* x, std::vector<double>* w) {
  switch (n) {
    case 2:
      *x = {0.2113248654051871, 0.7886751345948129};
      *w = {0.5, 0.5};
      return;
    case 3:
      *x = {0.1127016653792583, 0.5, 0.8872983346207417};
      *w = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
      return;
    case 4:
      *x = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281,
            0.9305681557970263};
      *w = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731,
            0.1739274225687269};
      return;
    default:
      throw GridError("gauss_rule: supported n are 2, 3, 4");
  }
}

// Doubled-grid descriptor: same spacing, indices [0, 2N), f embedded at
// [N/2, 3N/2) so that physical positions match the source grid.
struct PaddedGrid {
  GridSpec fine;
  int n2 = 0;
  int shift = 0;

  explicit PaddedGrid(const GridSpec& g) {
    fine = g;
    fine.points_per_axis = 2 * g.points_per_axis;
    fine.box_side = 2.0 * g.box_side;
    n2 = fine.points_per_axis;
    shift = g.points_per_axis / 2;
  }
};

const int kSymI[6] = {0, 1, 2, 0, 0, 1};
const int kSymJ[6] = {0, 1, 2, 1, 2, 2};

// d_i d_j (1/(4 pi |x|)) pairs, used for the image fold of the far part.
void newtonian_dd(Vec3 x, double out[6]) {
  double r2 = x.norm2();
  double r = std::sqrt(r2);
  double r3 = r2 * r, r5 = r3 * r2;
  for (int c = 0; c < 6; ++c) {
    int i = kSymI[c], j = kSymJ[c];
    double v = 3.0 * x[i] * x[j] / (4.0 * std::numbers::pi * r5);
    if (i == j) v -= 1.0 / (4.0 * std::numbers::pi * r3);
    out[c] = v;
  }
}

// Gaussian-local part of the image kernel: Gamma delta_ij plus
// D_loc = D - dd(N), both decaying like exp(-rho^2).
void oseen_local_part(Vec3 x, double s, double out[6]) {
  double r = x.norm();
  double rho = r / (2.0 * std::sqrt(s));
  double g = heat_kernel_radial(r, s);
  double E = 2.0 / std::sqrt(std::numbers::pi) * std::exp(-rho * rho);
  double erfc_rho = std::erfc(rho);
  double diag = (erfc_rho + rho * E) / (4.0 * std::numbers::pi * r * r * r);
  double quad = -(3.0 * erfc_rho + (3.0 * rho + 2.0 * rho * rho * rho) * E) /
                (4.0 * std::numbers::pi * std::pow(r, 5));
  for (int c = 0; c < 6; ++c) {
    int i = kSymI[c], j = kSymJ[c];
    double v = quad * x[i] * x[j];
    if (i == j) v += g + diag;
    out[c] = v;
  }
}

// Lattice fold of dd(N) over box images 0 < |n|_inf <= shells, once per run.
// The conditional convergence of this sum leaves only a constant tensor
// ambiguity, invisible to mean-zero forcing.
void newtonian_image_fold(const PaddedGrid& pg, double h, double box,
                          int shells, std::vector<double> out[6]) {
  int n2 = pg.n2;
  for (int c = 0; c < 6; ++c)
    out[c].assign(static_cast<std::size_t>(n2) * n2 * n2, 0.0);
  std::size_t idx = 0;
  double dd[6];
  for (int i = 0; i < n2; ++i) {
    int di = (i <= n2 / 2) ? i : i - n2;
    for (int j = 0; j < n2; ++j) {
      int dj = (j <= n2 / 2) ? j : j - n2;
      for (int k = 0; k < n2; ++k, ++idx) {
        int dk = (k <= n2 / 2) ? k : k - n2;
        Vec3 lag{di * h, dj * h, dk * h};
        double acc[6] = {0, 0, 0, 0, 0, 0};
        for (int a = -shells; a <= shells; ++a)
          for (int b = -shells; b <= shells; ++b)
            for (int cc = -shells; cc <= shells; ++cc) {
              if (a == 0 && b == 0 && cc == 0) continue;
              Vec3 y{lag.x + a * box, lag.y + b * box, lag.z + cc * box};
              // the ambiguous +L lag plane (unused by the read region) puts
              // one image exactly at the origin; skip it
              if (y.norm2() < 1e-12) continue;
              newtonian_dd(y, dd);
              for (int t = 0; t < 6; ++t) acc[t] += dd[t];
            }
        for (int t = 0; t < 6; ++t) out[t][idx] = acc[t];
      }
    }
  }
}

// Samples the (optionally periodized) Oseen tensor on the difference lattice
// of the padded grid. comp index: symmetric pairs (00,11,22,01,02,12).
void sample_oseen_lattice(const PaddedGrid& pg, double h, double box, double s,
                          bool periodize, const std::vector<double> newt_img[6],
                          std::vector<double> K[6]) {
  int n2 = pg.n2;
  double screen = std::pow(40.0, 2) * 4.0 * s;  // rho <= 40
  std::size_t idx = 0;
  double loc[6];
  for (int i = 0; i < n2; ++i) {
    int di = (i <= n2 / 2) ? i : i - n2;
    for (int j = 0; j < n2; ++j) {
      int dj = (j <= n2 / 2) ? j : j - n2;
      for (int k = 0; k < n2; ++k, ++idx) {
        int dk = (k <= n2 / 2) ? k : k - n2;
        Vec3 x{di * h, dj * h, dk * h};
        Mat3 S = oseen_tensor(x, s);
        for (int c = 0; c < 6; ++c) K[c][idx] = S(kSymI[c], kSymJ[c]);
        if (!periodize) continue;
        // Gaussian-local image terms from the nearest shell only.
        for (int a = -1; a <= 1; ++a)
          for (int b = -1; b <= 1; ++b)
            for (int cc = -1; cc <= 1; ++cc) {
              if (a == 0 && b == 0 && cc == 0) continue;
              Vec3 y{x.x + a * box, x.y + b * box, x.z + cc * box};
              if (y.norm2() > screen || y.norm2() < 1e-12) continue;
              oseen_local_part(y, s, loc);
              for (int t = 0; t < 6; ++t) K[t][idx] += loc[t];
            }
        for (int t = 0; t < 6; ++t) K[t][idx] += newt_img[t][idx];
      }
    }
  }
}

}  // namespace

OracleFrames build_v0_oracle(const VectorStack& f0, const TensorStack& f1,
                             const DuhamelConfig& cfg) {
  f0.validate();
  f1.validate();
  const GridSpec& g = f0.grid();
  const TimeGrid& tg = cfg.time;
  if (!(f0.time == tg)) throw GridError("build_v0_oracle: time grid mismatch");
  if (cfg.oracle_output_frames.empty())
    throw GridError("build_v0_oracle: oracle_output_frames must be set");

  PaddedGrid pg(g);
  int n = g.points_per_axis, n2 = pg.n2, sh = pg.shift;
  std::size_t npts = g.point_count();
  std::size_t npts2 = pg.fine.point_count();
  double h = g.spacing();
  double dt = tg.dt();

  // g = f0 + div f1, transformed once per frame on both grids: the padded
  // lattice feeds the sampled-kernel segment, the original grid feeds the
  // small-time head (so that both segments approximate the same L-periodic
  // operator when periodization is on).
  std::vector<std::vector<Complex>> ghat2(
      static_cast<std::size_t>(tg.nodes()) * 3);
  std::vector<std::vector<Complex>> ghatL(
      static_cast<std::size_t>(tg.nodes()) * 3);
  {
    ModeTables mtL(g);
    std::vector<Complex> GhatL[3];
    for (int c = 0; c < 3; ++c) GhatL[c].resize(npts);
    VectorField gm(g);
    TensorField F2(pg.fine);
    VectorField f02(pg.fine);
    std::vector<Complex> fhat2(npts2);
    for (int m = 0; m < tg.nodes(); ++m) {
      // original-grid divergence source
      tensor_divergence_hat(mtL, f1.frames[m], GhatL);
      std::vector<Complex> fhatL(npts);
      for (int c = 0; c < 3; ++c) {
        fft_forward(n, f0.frames[m].component(c), fhatL.data());
        for (std::size_t p = 0; p < npts; ++p) GhatL[c][p] += fhatL[p];
        ghatL[static_cast<std::size_t>(m) * 3 + c] = GhatL[c];
        // note: unprojected; the head applies the projection itself
      }
      // real-space g on the original grid, then embedded and transformed
      for (int c = 0; c < 3; ++c)
        fft_inverse(n, ghatL[static_cast<std::size_t>(m) * 3 + c].data(),
                    gm.component(c));
      for (double& v : f02.raw()) v = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            std::size_t src = g.index(i, j, k);
            std::size_t dst = pg.fine.index(i + sh, j + sh, k + sh);
            for (int c = 0; c < 3; ++c) f02.at(dst, c) = gm.at(src, c);
          }
      for (int c = 0; c < 3; ++c) {
        fft_forward(n2, f02.component(c), fhat2.data());
        ghat2[static_cast<std::size_t>(m) * 3 + c] = fhat2;
      }
    }
    (void)F2;
  }

  // Head cutoff: below s_c the sampled Gaussian core is narrower than a
  // cell; pick s_c as the smallest panel boundary with 2 s_c >= 1.5 h^2.
  int head_panels = std::max(1, static_cast<int>(std::ceil(0.75 * h * h / dt)));
  double s_c = head_panels * dt;
  (void)s_c;

  std::vector<double> gx, gw;
  gauss_rule(cfg.oracle_gauss_per_panel, &gx, &gw);

  ModeTables mtL(g);
  ModeTables mt2(pg.fine);
  std::vector<double> k2L(npts);
  {
    std::size_t idx = 0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c, ++idx) {
          double kx = mtL.kf[a], ky = mtL.kf[b], kz = mtL.kf[c];
          k2L[idx] = kx * kx + ky * ky + kz * kz;
        }
  }

  OracleFrames result;
  for (int m : cfg.oracle_output_frames) {
    if (m < 0 || m >= tg.nodes())
      throw GridError("build_v0_oracle: output frame out of range");
    result.frame_index.push_back(m);
  }
  std::size_t n_out = result.frame_index.size();

  // padded-grid accumulators for the sampled-kernel segment
  std::vector<std::vector<Complex>> acc(n_out * 3);
  for (auto& a : acc) a.assign(npts2, Complex(0.0, 0.0));
  // original-grid head accumulators
  std::vector<std::vector<Complex>> head(n_out * 3);
  for (auto& a : head) a.assign(npts, Complex(0.0, 0.0));

  auto lerp_hat = [&](const std::vector<std::vector<Complex>>& store,
                      std::size_t count, double tau, int c) {
    double f = (tau - tg.t0) / dt;
    int j0 = std::max(0, std::min(tg.nodes() - 2, static_cast<int>(f)));
    double w1 = f - j0;
    std::vector<Complex> out(count);
    const auto& a = store[static_cast<std::size_t>(j0) * 3 + c];
    const auto& b = store[static_cast<std::size_t>(j0 + 1) * 3 + c];
    for (std::size_t p = 0; p < count; ++p)
      out[p] = (1.0 - w1) * a[p] + w1 * b[p];
    return out;
  };

  // Head segment [0, s_c]: exact exponential integration of the L-periodic
  // heat multiplier against the piecewise-linear forcing model, projected.
  for (std::size_t o = 0; o < n_out; ++o) {
    int m = result.frame_index[o];
    double tm = tg.node(m);
    int panels = std::min(head_panels, m);
    for (int l = 0; l < panels; ++l) {
      for (int c = 0; c < 3; ++c) {
        std::vector<Complex> fa = lerp_hat(ghatL, npts, tm - (l + 1) * dt, c);
        std::vector<Complex> fb = lerp_hat(ghatL, npts, tm - l * dt, c);
        auto& A = head[o * 3 + c];
        for (std::size_t p = 0; p < npts; ++p) {
          double z = k2L[p] * dt;
          double alpha, beta;
          interval_weights(z, dt, &alpha, &beta);
          double damp = std::exp(-k2L[p] * (l * dt));
          A[p] += damp * (beta * fb[p] + alpha * fa[p]);
        }
      }
    }
    project_hat(mtL, &head[o * 3]);
  }

  // Main segment: closed-form kernels sampled at Gauss nodes of the shared
  // panel ladder, applied as an exact discrete convolution on the padded
  // lattice (periodized over box images by default).
  int max_m = 0;
  for (int m : result.frame_index) max_m = std::max(max_m, m);

  std::vector<double> newt_img[6];
  if (cfg.oracle_periodize)
    newtonian_image_fold(pg, h, g.box_side, cfg.oracle_image_shells, newt_img);
  else
    for (auto& v : newt_img) v.assign(npts2, 0.0);

  std::vector<double> K[6];
  for (auto& v : K) v.resize(npts2);
  std::vector<Complex> Khat[6];
  for (auto& v : Khat) v.resize(npts2);
  double cellw = h * h * h;

  for (int l = head_panels; l < max_m; ++l) {
    for (int gnode = 0; gnode < cfg.oracle_gauss_per_panel; ++gnode) {
      double s = (l + gx[gnode]) * dt;
      double wquad = gw[gnode] * dt;
      sample_oseen_lattice(pg, h, g.box_side, s, cfg.oracle_periodize,
                           newt_img, K);
      for (int c = 0; c < 6; ++c) {
        for (std::size_t p = 0; p < npts2; ++p)
          Khat[c][p] = Complex(K[c][p], 0.0);
        fft_forward_c(n2, Khat[c].data());
      }
      for (std::size_t o = 0; o < n_out; ++o) {
        int m = result.frame_index[o];
        if (l >= m) continue;
        double tau = tg.node(m) - s;
        if (tau < tg.t0) continue;
        std::vector<Complex> f[3];
        for (int c = 0; c < 3; ++c) f[c] = lerp_hat(ghat2, npts2, tau, c);
        static const int sym[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
        for (int i = 0; i < 3; ++i) {
          auto& A = acc[o * 3 + i];
          for (int j = 0; j < 3; ++j) {
            const auto& Kc = Khat[sym[i][j]];
            const auto& fj = f[j];
            for (std::size_t p = 0; p < npts2; ++p)
              A[p] += wquad * cellw * Kc[p] * fj[p];
          }
        }
      }
    }
  }

  // Inverse transforms, restriction, head addition.
  for (std::size_t o = 0; o < n_out; ++o) {
    VectorField out(g);
    VectorField big(pg.fine);
    for (int c = 0; c < 3; ++c)
      fft_inverse(n2, acc[o * 3 + c].data(), big.component(c));
    VectorField head_field(g);
    for (int c = 0; c < 3; ++c)
      fft_inverse(n, head[o * 3 + c].data(), head_field.component(c));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int c = 0; c < 3; ++c)
            out.at(g.index(i, j, k), c) =
                big.at(pg.fine.index(i + sh, j + sh, k + sh), c) +
                head_field.at(g.index(i, j, k), c);
    result.value.push_back(std::move(out));
  }
  return result;
}

ScalarField pressure_from_velocity(const VectorField& u) {
  const GridSpec& g = u.grid();
  ModeTables mt(g);
  int n = g.points_per_axis;
  std::size_t npts = g.point_count();
  std::vector<Complex> phat(npts, Complex(0.0, 0.0));
  std::vector<Complex> fhat(npts);
  std::vector<double> prod(npts);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      for (std::size_t p = 0; p < npts; ++p)
        prod[p] = u.at(p, i) * u.at(p, j);
      fft_forward(n, prod.data(), fhat.data());
      double mult = (i == j) ? 1.0 : 2.0;
      std::size_t idx = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c, ++idx) {
            double ki = (i == 0) ? mt.kd[a] : (i == 1) ? mt.kd[b] : mt.kd[c];
            double kj = (j == 0) ? mt.kd[a] : (j == 1) ? mt.kd[b] : mt.kd[c];
            phat[idx] += mult * ki * kj * fhat[idx];
          }
    }
  // -lap p = d_i d_j (u_i u_j)  =>  k^2 phat = -(i k_i)(i k_j) (...)
  std::size_t idx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c, ++idx) {
        double kx = mt.kf[a], ky = mt.kf[b], kz = mt.kf[c];
        double k2 = kx * kx + ky * ky + kz * kz;
        phat[idx] = (k2 == 0.0) ? Complex(0.0, 0.0) : -phat[idx] / k2;
      }
  ScalarField out(g);
  fft_inverse(n, phat.data(), out.component(0));
  return out;
}

YamazakiReport yamazaki_probe(const VectorField& u, double p, double q,
                              double T) {
  if (!(1.0 < p && p <= q && q < kInf))
    throw GridError("yamazaki_probe: need 1 < p <= q < inf");
  const GridSpec& g = u.grid();

  // mean-zero validation (caller's duty per the projection convention)
  for (int c = 0; c < 3; ++c) {
    double mean = 0.0;
    const double* comp = u.component(c);
    double scale = 0.0;
    for (std::size_t i = 0; i < g.point_count(); ++i) {
      mean += comp[i];
      scale += std::abs(comp[i]);
    }
    if (std::abs(mean) > 1e-10 * std::max(scale, 1e-300))
      throw GridError("yamazaki_probe: u must be mean-zero");
  }

  double alpha = 1.5 / p - 1.5 / q - 0.5;

  ModeTables mt(g);
  int n = g.points_per_axis;
  std::size_t npts = g.point_count();
  std::vector<Complex> uhat[3];
  for (int c = 0; c < 3; ++c) {
    uhat[c].resize(npts);
    fft_forward(n, u.component(c), uhat[c].data());
  }
  project_hat(mt, uhat);

  ScalarField mask = box_mask(g);
  auto grad_norm = [&](double t) {
    // || grad e^{-tA} u ||_{L^{q,1}} of the 9-component gradient magnitude
    Field<9> gradu(g);
    std::vector<Complex> hat(npts);
    for (int ci = 0; ci < 3; ++ci)
      for (int a = 0; a < 3; ++a) {
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k, ++idx) {
              double kx = mt.kf[i], ky = mt.kf[j], kz = mt.kf[k];
              double k2 = kx * kx + ky * ky + kz * kz;
              double ka = (a == 0) ? mt.kd[i] : (a == 1) ? mt.kd[j] : mt.kd[k];
              hat[idx] = uhat[ci][idx] * std::exp(-k2 * t) * Complex(0.0, ka);
            }
        fft_inverse(n, hat.data(), gradu.component(3 * ci + a));
      }
    return lorentz_norm(gradu, mask, q, 1.0).value;
  };

  // Graded ladder: t = 0, then geometric from t_min to 2T.
  double t_min = std::min(1e-4, T * 1e-4);
  int per_decade = 12;
  std::vector<double> nodes{0.0};
  double decades = std::log10(2.0 * T / t_min);
  int n_nodes = std::max(8, static_cast<int>(std::ceil(decades * per_decade)));
  for (int i = 0; i <= n_nodes; ++i)
    nodes.push_back(t_min * std::pow(2.0 * T / t_min, double(i) / n_nodes));
  // make sure T itself is a node
  nodes.push_back(T);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::vector<double> vals(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = grad_norm(nodes[i]);

  // Product integration of t^alpha against piecewise-linear data.
  auto segment = [&](double a, double b, double fa, double fb) {
    // int_a^b t^alpha (fa + (fb-fa)(t-a)/(b-a)) dt, alpha > -1
    auto mom = [&](double e) {
      return (std::pow(b, e + 1.0) - std::pow(a, e + 1.0)) / (e + 1.0);
    };
    double m0 = mom(alpha), m1 = mom(alpha + 1.0);
    double slope = (fb - fa) / (b - a);
    return fa * m0 + slope * (m1 - a * m0);
  };

  YamazakiReport rep;
  rep.p = p;
  rep.q = q;
  rep.T = T;
  rep.n_nodes = static_cast<int>(nodes.size());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double a = nodes[i], b = nodes[i + 1];
    double contrib = segment(a, b, vals[i], vals[i + 1]);
    if (b <= T + 1e-14)
      rep.value += contrib;
    else
      rep.tail_increment += contrib;
  }
  return rep;
}

}  // namespace nslab
