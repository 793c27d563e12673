#include "nslab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace nslab {

namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

// FFTW planner is not thread-safe; execution via fftw_execute_dft is.
std::mutex g_plan_mutex;
std::map<int, PlanPair>& plan_cache() {
  static std::map<int, PlanPair> cache;
  return cache;
}

PlanPair plans_for(int n) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Complex> buf(static_cast<std::size_t>(n) * n * n);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  PlanPair pp;
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  pp.fwd = fftw_plan_dft_3d(n, n, n, p, p, FFTW_FORWARD, flags);
  pp.bwd = fftw_plan_dft_3d(n, n, n, p, p, FFTW_BACKWARD, flags);
  cache[n] = pp;
  return pp;
}

}  // namespace

void fft_forward_c(int n, Complex* inout) {
  PlanPair pp = plans_for(n);
  auto* p = reinterpret_cast<fftw_complex*>(inout);
  fftw_execute_dft(pp.fwd, p, p);
}

void fft_inverse_c(int n, Complex* inout) {
  PlanPair pp = plans_for(n);
  auto* p = reinterpret_cast<fftw_complex*>(inout);
  fftw_execute_dft(pp.bwd, p, p);
  double scale = 1.0 / (static_cast<double>(n) * n * n);
  std::size_t total = static_cast<std::size_t>(n) * n * n;
  for (std::size_t i = 0; i < total; ++i) inout[i] *= scale;
}

void fft_forward(int n, const double* in, Complex* out) {
  std::size_t total = static_cast<std::size_t>(n) * n * n;
  for (std::size_t i = 0; i < total; ++i) out[i] = Complex(in[i], 0.0);
  fft_forward_c(n, out);
}

void fft_inverse(int n, const Complex* in, double* out) {
  std::size_t total = static_cast<std::size_t>(n) * n * n;
  std::vector<Complex> buf(in, in + total);
  fft_inverse_c(n, buf.data());
  for (std::size_t i = 0; i < total; ++i) out[i] = buf[i].real();
}

double wavenumber(const GridSpec& g, int n) {
  int N = g.points_per_axis;
  int s = (n < N / 2) ? n : n - N;
  return 2.0 * std::numbers::pi * s / g.box_side;
}

double wavenumber_deriv(const GridSpec& g, int n) {
  int N = g.points_per_axis;
  if (n == N / 2) return 0.0;
  return wavenumber(g, n);
}

template <int C>
std::vector<Complex> to_spectrum(const Field<C>& f) {
  int n = f.grid().points_per_axis;
  std::size_t npts = f.grid().point_count();
  std::vector<Complex> hat(npts * C);
  for (int c = 0; c < C; ++c)
    fft_forward(n, f.component(c), hat.data() + c * npts);
  return hat;
}

template <int C>
Field<C> from_spectrum(const GridSpec& g, const std::vector<Complex>& hat) {
  int n = g.points_per_axis;
  std::size_t npts = g.point_count();
  Field<C> f(g);
  for (int c = 0; c < C; ++c)
    fft_inverse(n, hat.data() + c * npts, f.component(c));
  return f;
}

template std::vector<Complex> to_spectrum<1>(const Field<1>&);
template std::vector<Complex> to_spectrum<3>(const Field<3>&);
template std::vector<Complex> to_spectrum<9>(const Field<9>&);
template Field<1> from_spectrum<1>(const GridSpec&, const std::vector<Complex>&);
template Field<3> from_spectrum<3>(const GridSpec&, const std::vector<Complex>&);
template Field<9> from_spectrum<9>(const GridSpec&, const std::vector<Complex>&);

namespace {

// Applies op(hat, i, j, k, linear_index) over all modes of one component.
template <typename Op>
void for_modes(const GridSpec& g, Op&& op) {
  int n = g.points_per_axis;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) op(i, j, k, idx);
}

}  // namespace

template <int C>
Field<C> derivative(const Field<C>& f, int axis) {
  if (axis < 0 || axis > 2) throw GridError("derivative: bad axis");
  const GridSpec& g = f.grid();
  int n = g.points_per_axis;
  std::size_t npts = g.point_count();
  std::vector<double> kd(n);
  for (int m = 0; m < n; ++m) kd[m] = wavenumber_deriv(g, m);
  Field<C> out(g);
  std::vector<Complex> hat(npts);
  for (int c = 0; c < C; ++c) {
    fft_forward(n, f.component(c), hat.data());
    for_modes(g, [&](int i, int j, int k, std::size_t idx) {
      double kk = (axis == 0) ? kd[i] : (axis == 1) ? kd[j] : kd[k];
      hat[idx] *= Complex(0.0, kk);
    });
    fft_inverse(n, hat.data(), out.component(c));
  }
  return out;
}

template Field<1> derivative<1>(const Field<1>&, int);
template Field<3> derivative<3>(const Field<3>&, int);
template Field<9> derivative<9>(const Field<9>&, int);

VectorField gradient(const ScalarField& f) {
  VectorField out(f.grid());
  for (int a = 0; a < 3; ++a) {
    ScalarField d = derivative(f, a);
    std::copy(d.raw().begin(), d.raw().end(),
              out.raw().begin() + a * f.grid().point_count());
  }
  return out;
}

ScalarField divergence(const VectorField& f) {
  const GridSpec& g = f.grid();
  ScalarField out(g);
  for (int a = 0; a < 3; ++a) {
    ScalarField comp(g);
    std::copy(f.component(a), f.component(a) + g.point_count(),
              comp.raw().begin());
    ScalarField d = derivative(comp, a);
    for (std::size_t i = 0; i < g.point_count(); ++i) out.at(i) += d.at(i);
  }
  return out;
}

VectorField curl(const VectorField& f) {
  const GridSpec& g = f.grid();
  auto comp_deriv = [&](int c, int axis) {
    ScalarField s(g);
    std::copy(f.component(c), f.component(c) + g.point_count(),
              s.raw().begin());
    return derivative(s, axis);
  };
  ScalarField dz_y = comp_deriv(2, 1), dy_z = comp_deriv(1, 2);
  ScalarField dx_z = comp_deriv(0, 2), dz_x = comp_deriv(2, 0);
  ScalarField dy_x = comp_deriv(1, 0), dx_y = comp_deriv(0, 1);
  VectorField out(g);
  for (std::size_t i = 0; i < g.point_count(); ++i) {
    out.at(i, 0) = dz_y.at(i) - dy_z.at(i);
    out.at(i, 1) = dx_z.at(i) - dz_x.at(i);
    out.at(i, 2) = dy_x.at(i) - dx_y.at(i);
  }
  return out;
}

template <int C>
Field<C> laplacian(const Field<C>& f) {
  const GridSpec& g = f.grid();
  int n = g.points_per_axis;
  std::size_t npts = g.point_count();
  std::vector<double> kw(n);
  for (int m = 0; m < n; ++m) kw[m] = wavenumber(g, m);
  Field<C> out(g);
  std::vector<Complex> hat(npts);
  for (int c = 0; c < C; ++c) {
    fft_forward(n, f.component(c), hat.data());
    for_modes(g, [&](int i, int j, int k, std::size_t idx) {
      double k2 = kw[i] * kw[i] + kw[j] * kw[j] + kw[k] * kw[k];
      hat[idx] *= -k2;
    });
    fft_inverse(n, hat.data(), out.component(c));
  }
  return out;
}

template Field<1> laplacian<1>(const Field<1>&);
template Field<3> laplacian<3>(const Field<3>&);
template Field<9> laplacian<9>(const Field<9>&);

double field_mean(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.raw()) s += v;
  return s / static_cast<double>(f.raw().size());
}

ScalarField solve_poisson_neg(const ScalarField& source, double rel_mean_tol) {
  const GridSpec& g = source.grid();
  double mean = field_mean(source);
  double scale = 0.0;
  for (double v : source.raw()) scale += std::abs(v);
  scale /= static_cast<double>(source.raw().size());
  if (std::abs(mean) > rel_mean_tol * std::max(scale, 1e-300)) {
    std::ostringstream os;
    os << "solve_poisson_neg: source not mean-zero (residual mean " << mean
       << ", mean magnitude " << scale << ")";
    throw GridError(os.str());
  }
  int n = g.points_per_axis;
  std::vector<double> kw(n);
  for (int m = 0; m < n; ++m) kw[m] = wavenumber(g, m);
  std::vector<Complex> hat(g.point_count());
  fft_forward(n, source.component(0), hat.data());
  for_modes(g, [&](int i, int j, int k, std::size_t idx) {
    double k2 = kw[i] * kw[i] + kw[j] * kw[j] + kw[k] * kw[k];
    hat[idx] = (k2 == 0.0) ? Complex(0.0, 0.0) : hat[idx] / k2;
  });
  ScalarField out(g);
  fft_inverse(n, hat.data(), out.component(0));
  return out;
}

template <int C>
Field<C> heat_semigroup(const Field<C>& f, double t) {
  if (t < 0.0) throw GridError("heat_semigroup: t must be >= 0");
  const GridSpec& g = f.grid();
  int n = g.points_per_axis;
  std::size_t npts = g.point_count();
  std::vector<double> kw(n);
  for (int m = 0; m < n; ++m) kw[m] = wavenumber(g, m);
  Field<C> out(g);
  std::vector<Complex> hat(npts);
  for (int c = 0; c < C; ++c) {
    fft_forward(n, f.component(c), hat.data());
    for_modes(g, [&](int i, int j, int k, std::size_t idx) {
      double k2 = kw[i] * kw[i] + kw[j] * kw[j] + kw[k] * kw[k];
      hat[idx] *= std::exp(-k2 * t);
    });
    fft_inverse(n, hat.data(), out.component(c));
  }
  return out;
}

template Field<1> heat_semigroup<1>(const Field<1>&, double);
template Field<3> heat_semigroup<3>(const Field<3>&, double);

double trig_eval(const ScalarField& f, Vec3 x) {
  const GridSpec& g = f.grid();
  int n = g.points_per_axis;
  std::vector<Complex> hat = to_spectrum(f);
  Vec3 a{g.coord(0, 0), g.coord(1, 0), g.coord(2, 0)};
  Vec3 d = x - a;
  Complex acc(0.0, 0.0);
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) {
        // Nyquist handled with the real (cosine) convention per axis.
        auto axis_factor = [&](int m, double delta) -> Complex {
          if (m == n / 2) {
            double kk = std::numbers::pi * n / g.box_side;
            return Complex(std::cos(kk * delta), 0.0);
          }
          double kk = wavenumber(g, m);
          return std::polar(1.0, kk * delta);
        };
        acc += hat[idx] * axis_factor(i, d.x) * axis_factor(j, d.y) *
               axis_factor(k, d.z);
      }
  return acc.real() / static_cast<double>(g.point_count());
}

// ---- rescaling ------------------------------------------------------------

namespace {

double trilinear_eval(const VectorField& u, Vec3 x, int c) {
  const GridSpec& g = u.grid();
  int n = g.points_per_axis;
  double h = g.spacing();
  // Fractional index relative to node 0, with periodic wrap.
  auto frac = [&](int axis, double v) {
    double f = (v - g.coord(axis, 0)) / h;
    double w = std::floor(f);
    return std::pair<int, double>(static_cast<int>(w), f - w);
  };
  auto [i0, fx] = frac(0, x.x);
  auto [j0, fy] = frac(1, x.y);
  auto [k0, fz] = frac(2, x.z);
  auto wrap = [&](int v) { return ((v % n) + n) % n; };
  double acc = 0.0;
  for (int di = 0; di < 2; ++di)
    for (int dj = 0; dj < 2; ++dj)
      for (int dk = 0; dk < 2; ++dk) {
        double w = (di ? fx : 1.0 - fx) * (dj ? fy : 1.0 - fy) *
                   (dk ? fz : 1.0 - fz);
        acc += w * u.at(wrap(i0 + di), wrap(j0 + dj), wrap(k0 + dk), c);
      }
  return acc;
}

}  // namespace

RescaledField rescale_field(const VectorField& u, Vec3 x0, double R,
                            Interpolation method) {
  if (!(R > 0.0)) throw GridError("rescale_field: R must be > 0");
  const GridSpec& g = u.grid();
  require_ball_in_box(g, x0, 2.0 * R);

  GridSpec tg;
  tg.box_side = g.box_side / R;
  tg.points_per_axis = g.points_per_axis;
  tg.origin_offset = {0.0, 0.0, 0.0};

  VectorField out(tg);
  int n = g.points_per_axis;

  if (method == Interpolation::trigonometric) {
    // Target sample locations x0 + R*x_j form the source lattice shifted by
    // a constant, so trigonometric interpolation is a per-axis phase shift.
    std::array<double, 3> delta;
    for (int a = 0; a < 3; ++a)
      delta[a] = x0[a] - g.origin_offset[a];
    std::size_t npts = g.point_count();
    std::vector<Complex> hat(npts);
    std::vector<std::vector<Complex>> phase(3,
                                            std::vector<Complex>(n));
    for (int a = 0; a < 3; ++a)
      for (int m = 0; m < n; ++m) {
        if (m == n / 2) {
          double kk = std::numbers::pi * n / g.box_side;
          phase[a][m] = Complex(std::cos(kk * delta[a]), 0.0);
        } else {
          phase[a][m] = std::polar(1.0, wavenumber(g, m) * delta[a]);
        }
      }
    for (int c = 0; c < 3; ++c) {
      fft_forward(n, u.component(c), hat.data());
      std::size_t idx = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k, ++idx)
            hat[idx] *= phase[0][i] * phase[1][j] * phase[2][k];
      fft_inverse(n, hat.data(), out.component(c));
    }
    for (double& v : out.raw()) v *= R;
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Vec3 y = x0 + R * tg.node(i, j, k);
          for (int c = 0; c < 3; ++c)
            out.at(i, j, k, c) = R * trilinear_eval(u, y, c);
        }
  }
  return {std::move(out), method};
}

}  // namespace nslab
