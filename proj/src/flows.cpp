#include "nslab/flows.hpp"

#include <cmath>
#include <numbers>

#include "nslab/spectral.hpp"
#include "nslab/stokes.hpp"

namespace nslab {

VectorStack TestFlow::sample(const GridSpec& g, const TimeGrid& tg) const {
  return sample_vector_time(g, tg, velocity);
}

ScalarStack TestFlow::sample_pressure(const GridSpec& g,
                                      const TimeGrid& tg) const {
  if (!pressure) throw FlowError("flow '" + name + "' has no pressure");
  return sample_scalar_time(g, tg, pressure);
}

TestFlow serrin_flow(const TimePoly& g, const Poly3& h) {
  if (!h.laplacian().is_zero(1e-12 * std::max(1.0, h.max_abs_coeff())))
    throw FlowError("serrin_flow: h is not harmonic");

  PolyFlow pf;
  std::array<Poly3, 3> grad_h;
  for (int a = 0; a < 3; ++a) {
    grad_h[a] = h.derivative(a);
    pf.u[a].push_back({g, grad_h[a]});
  }
  Poly3 grad_sq;
  for (int a = 0; a < 3; ++a) grad_sq = grad_sq + grad_h[a] * grad_h[a];
  pf.p.push_back({g.derivative() * (-1.0), h});
  pf.p.push_back({g * g * (-0.5), grad_sq});

  // Strong-residual cancellation, checked symbolically:
  // d_t u + (u.grad)u - lap u + grad p = 0 term by term.
  for (int i = 0; i < 3; ++i) {
    // d_t u_i = g' dh_i ; grad p first term = -g' dh_i  -> cancels
    // (u.grad)u_i = g^2 * (1/2) d_i |grad h|^2 ; second p term cancels it
    // lap u_i = g * lap(dh_i) = 0 since h harmonic
    Poly3 lap_dh = grad_h[i].laplacian();
    if (!lap_dh.is_zero(1e-12 * std::max(1.0, h.max_abs_coeff())))
      throw FlowError("serrin_flow: residual does not cancel");
    Poly3 adv;
    for (int j = 0; j < 3; ++j) adv = adv + grad_h[j] * grad_h[j].derivative(i);
    Poly3 diff = adv - grad_sq.derivative(i) * 0.5;
    if (!diff.is_zero(1e-12 * std::max(1.0, grad_sq.max_abs_coeff())))
      throw FlowError("serrin_flow: advective identity failed");
  }

  TestFlow flow;
  flow.name = "serrin";
  flow.poly = pf;
  flow.divergence_free = true;
  TimePoly gd = g.derivative();
  TimePoly g2 = g * g;
  flow.velocity = [g, grad_h](Vec3 x, double t) {
    double gt = g.eval(t);
    return Vec3{gt * grad_h[0].eval(x), gt * grad_h[1].eval(x),
                gt * grad_h[2].eval(x)};
  };
  flow.pressure = [gd, g2, h, grad_sq](Vec3 x, double t) {
    return -gd.eval(t) * h.eval(x) - 0.5 * g2.eval(t) * grad_sq.eval(x);
  };
  return flow;
}

namespace {

// Axisymmetric jet profiles in spherical coordinates, axis e3, c = cos theta:
//   u_r     = (2/r) [ (A^2 - 1)/(A - c)^2 - 1 ]
//   u_theta = -2 sin(theta) / (r (A - c))
//   p       = kLandauPressure (A c - 1) / (r^2 (A - c)^2)
// The pressure constant is fixed by the momentum balance and guarded by the
// stationary residual tests.
constexpr double kLandauPressure = 4.0;

Vec3 landau_velocity(Vec3 x, double A) {
  double r = x.norm();
  double c = x.z / r;
  double denom = A - c;
  double ur = (2.0 / r) * ((A * A - 1.0) / (denom * denom) - 1.0);
  // u_theta e_theta assembled in Cartesian form, safe on the axis:
  // u_theta e_theta = -2/(r (A-c)) * (c x1 / r, c x2 / r, -s^2)
  double s2 = 1.0 - c * c;
  double f = -2.0 / (r * denom);
  Vec3 v;
  v.x = ur * x.x / r + f * (c * x.x / r);
  v.y = ur * x.y / r + f * (c * x.y / r);
  v.z = ur * x.z / r + f * (-s2);
  return v;
}

double landau_pressure(Vec3 x, double A) {
  double r = x.norm();
  double c = x.z / r;
  double denom = A - c;
  return kLandauPressure * (A * c - 1.0) / (r * r * denom * denom);
}

}  // namespace

TestFlow landau_flow(double A) {
  if (!(A > 1.0)) throw FlowError("landau_flow: parameter must be > 1");
  TestFlow flow;
  flow.name = "landau";
  flow.divergence_free = true;
  flow.homogeneity_degree = -1.0;
  flow.velocity = [A](Vec3 x, double) { return landau_velocity(x, A); };
  flow.pressure = [A](Vec3 x, double) { return landau_pressure(x, A); };

  // Construction-time spot checks: homogeneity and divergence.
  const Vec3 probes[3] = {{0.7, -0.3, 0.5}, {1.1, 0.2, -0.9}, {-0.4, 0.8, 0.6}};
  for (const Vec3& x : probes) {
    Vec3 a = flow.velocity(x * 2.0, 0.0);
    Vec3 b = flow.velocity(x, 0.0);
    for (int ccomp = 0; ccomp < 3; ++ccomp)
      if (std::abs(a[ccomp] - 0.5 * b[ccomp]) >
          1e-12 * std::max(1.0, std::abs(b[ccomp])))
        throw FlowError("landau_flow: homogeneity check failed");
    double e = 1e-5;
    double div = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 dp = x, dm = x;
      dp[axis] += e;
      dm[axis] -= e;
      div += (flow.velocity(dp, 0.0)[axis] - flow.velocity(dm, 0.0)[axis]) /
             (2.0 * e);
    }
    if (std::abs(div) > 1e-5 * b.norm())
      throw FlowError("landau_flow: divergence check failed");
  }
  return flow;
}

namespace {

// splitmix64: tiny deterministic generator (independent of libstdc++
// distribution internals).
struct SplitMix {
  std::uint64_t s;
  explicit SplitMix(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() {  // (0, 1)
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }
  double gaussian() {
    double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }
};

}  // namespace

VectorField random_solenoidal(const GridSpec& g, std::uint64_t seed,
                              const SpectrumSpec& spec) {
  g.validate();
  int n = g.points_per_axis;
  if (spec.shell_hi >= n / 2)
    throw FlowError("random_solenoidal: band limit above Nyquist");
  SplitMix rng(seed);
  VectorField white(g);
  for (double& v : white.raw()) v = rng.gaussian();

  // Band-pass in shell index, then project.
  std::size_t npts = g.point_count();
  std::vector<Complex> hat(npts);
  VectorField filtered(g);
  int lo2 = spec.shell_lo * spec.shell_lo, hi2 = spec.shell_hi * spec.shell_hi;
  for (int c = 0; c < 3; ++c) {
    fft_forward(n, white.component(c), hat.data());
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k, ++idx) {
          auto sgn = [n](int m) { return (m < n / 2) ? m : m - n; };
          int si = sgn(i), sj = sgn(j), sk = sgn(k);
          int nn = si * si + sj * sj + sk * sk;
          if (nn < lo2 || nn > hi2) hat[idx] = Complex(0.0, 0.0);
        }
    fft_inverse(n, hat.data(), filtered.component(c));
  }
  VectorField out = leray_project(filtered);
  double scale = spec.amplitude / std::max(max_abs(out), 1e-300);
  out *= scale;
  return out;
}

}  // namespace nslab
