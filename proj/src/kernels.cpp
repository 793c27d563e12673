#include "nslab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "nslab/spectral.hpp"

namespace nslab {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

void require_time(double t) {
  if (!(t > 0.0)) throw KernelError("kernel evaluation requires t > 0");
}

// E(rho) = (2/sqrt(pi)) exp(-rho^2), G1 = erf(rho) - rho E.
double fn_E(double rho) { return 2.0 / kSqrtPi * std::exp(-rho * rho); }
double fn_G1(double rho) { return std::erf(rho) - rho * fn_E(rho); }

constexpr double kSeriesCut = 0.7;
constexpr int kSeriesTerms = 40;

// A = psi'/r = -G1 / (4 pi r^3); series in rho for small rho.
double profile_A(double r, double t, double rho) {
  if (rho >= kSeriesCut) return -fn_G1(rho) / (4.0 * kPi * r * r * r);
  // A = -1/(16 pi^{3/2} t^{3/2}) sum_{n>=1} (-1)^{n+1} 2n/(n!(2n+1)) rho^{2(n-1)}
  double rho2 = rho * rho;
  double pw = 1.0;
  double fact = 1.0;
  double acc = 0.0;
  for (int n = 1; n <= kSeriesTerms; ++n) {
    fact *= n;
    double term = 2.0 * n / (fact * (2.0 * n + 1.0)) * pw;
    if (n % 2 == 0) term = -term;
    acc += term;
    if (std::abs(term) < 1e-18 * std::abs(acc)) break;
    pw *= rho2;
  }
  return -acc / (16.0 * std::pow(kPi, 1.5) * std::pow(t, 1.5));
}

// C = (B - A)/r^2 = (3 G1 - 2 rho^3 E) / (4 pi r^5).
double profile_C(double r, double t, double rho) {
  if (rho >= kSeriesCut) {
    double num = 3.0 * fn_G1(rho) - 2.0 * rho * rho * rho * fn_E(rho);
    return num / (4.0 * kPi * std::pow(r, 5));
  }
  // C = 1/(64 pi^{3/2} t^{5/2}) sum_{m>=2} c_m rho^{2(m-2)},
  // c_m = (-1)^m 4(m-1) / ((m-1)!(2m+1)).
  double rho2 = rho * rho;
  double pw = 1.0;
  double fact = 1.0;  // (m-1)! starting at m=2 -> 1!
  double acc = 0.0;
  for (int m = 2; m <= kSeriesTerms; ++m) {
    fact *= (m - 1);
    double term = 4.0 * (m - 1) / (fact * (2.0 * m + 1.0)) * pw;
    if (m % 2 != 0) term = -term;
    acc += term;
    if (std::abs(term) < 1e-18 * std::abs(acc)) break;
    pw *= rho2;
  }
  return acc / (64.0 * std::pow(kPi, 1.5) * std::pow(t, 2.5));
}

// C_r = (4 rho^5 E + 10 rho^3 E - 15 G1) / (4 pi r^6).
double profile_Cr(double r, double t, double rho) {
  if (rho >= kSeriesCut) {
    double E = fn_E(rho);
    double num = (4.0 * std::pow(rho, 5) + 10.0 * std::pow(rho, 3)) * E -
                 15.0 * fn_G1(rho);
    return num / (4.0 * kPi * std::pow(r, 6));
  }
  // C_r = 1/(128 pi^{3/2} t^3) sum_{m>=3} d_m rho^{2m-5},
  // d_m = (-1)^m [4/(m-2)! - 10/(m-1)! + 30/((m-1)!(2m+1))].
  double rho2 = rho * rho;
  double pw = rho;  // rho^{2m-5} at m=3
  double fact_m2 = 1.0;  // (m-2)!
  double fact_m1 = 2.0;  // (m-1)!
  double acc = 0.0;
  for (int m = 3; m <= kSeriesTerms; ++m) {
    double d = 4.0 / fact_m2 - 10.0 / fact_m1 + 30.0 / (fact_m1 * (2.0 * m + 1.0));
    if (m % 2 != 0) d = -d;
    double term = d * pw;
    acc += term;
    if (std::abs(term) < 1e-18 * std::abs(acc) && m > 4) break;
    pw *= rho2;
    fact_m2 *= (m - 1);
    fact_m1 *= m;
  }
  return acc / (128.0 * std::pow(kPi, 1.5) * std::pow(t, 3));
}

// Adaptive Simpson quadrature (for the oracle paths).
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int depth = 24) {
  std::function<double(double, double, double, double, double, double, int)>
      rec = [&](double lo, double hi, double flo, double fmid, double fhi,
                double whole, int d) -> double {
    double mid = 0.5 * (lo + hi);
    double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    double flm = f(lm), frm = f(rm);
    double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(lo, mid, flo, flm, fmid, left, d - 1) +
           rec(mid, hi, fmid, frm, fhi, right, d - 1);
  };
  double mid = 0.5 * (a + b);
  double fa = f(a), fm = f(mid), fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, depth);
}

// Panelized variant: integrands here have features (Gaussian cores) much
// narrower than the interval, which a single coarse probe can miss entirely.
double panel_simpson(const std::function<double(double)>& f, double a,
                     double b, double feature, double tol) {
  int n = std::clamp(static_cast<int>(std::ceil((b - a) / feature)), 4, 512);
  double acc = 0.0;
  double h = (b - a) / n;
  for (int i = 0; i < n; ++i)
    acc += adaptive_simpson(f, a + i * h, a + (i + 1) * h, tol / n, 18);
  return acc;
}

}  // namespace

double heat_kernel_radial(double r, double t) {
  require_time(t);
  double c = std::pow(4.0 * kPi * t, -1.5);
  return c * std::exp(-r * r / (4.0 * t));
}

double heat_kernel(Vec3 x, double t) { return heat_kernel_radial(x.norm(), t); }

double gaussian_potential(double r, double t) {
  require_time(t);
  double rho = r / (2.0 * std::sqrt(t));
  if (rho < 1e-6) {
    // erf(rho)/(4 pi r) = (1/(8 pi sqrt(t))) E(rho) series head
    return (1.0 / (4.0 * kPi * 2.0 * std::sqrt(t))) *
           (2.0 / kSqrtPi) * (1.0 - rho * rho / 3.0);
  }
  return std::erf(rho) / (4.0 * kPi * r);
}

Mat3 oseen_tensor(Vec3 x, double t) {
  require_time(t);
  double r = x.norm();
  double rho = r / (2.0 * std::sqrt(t));
  double g = heat_kernel_radial(r, t);
  double A = profile_A(r, t, rho);
  double C = profile_C(r, t, rho);
  Mat3 s;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double v = C * x[i] * x[j];
      if (i == j) v += g + A;
      s(i, j) = v;
    }
  }
  return s;
}

std::array<Mat3, 3> oseen_gradient(Vec3 x, double t) {
  require_time(t);
  double r = x.norm();
  double rho = r / (2.0 * std::sqrt(t));
  double g = heat_kernel_radial(r, t);
  double C = profile_C(r, t, rho);
  double Cr = profile_Cr(r, t, rho);
  double gr = -(r / (2.0 * t)) * g;       // dGamma/dr
  double Ar = r * C;                      // dA/dr
  // xhat is safe: gr ~ r and Ar ~ r near 0, and Cr ~ r kills the x x x term.
  Vec3 xh = (r > 0.0) ? x / r : Vec3{0.0, 0.0, 0.0};
  std::array<Mat3, 3> out;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = 0.0;
        if (i == j) v += (gr + Ar) * xh[k];
        if (k == i) v += C * x[j];
        if (k == j) v += C * x[i];
        v += x[i] * x[j] * Cr * xh[k];
        out[k](i, j) = v;
      }
  return out;
}

Mat3 oseen_time_derivative(Vec3 x, double t) {
  require_time(t);
  double r2 = x.norm2();
  double g = heat_kernel_radial(std::sqrt(r2), t);
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double v = -x[i] * x[j] / (4.0 * t * t);
      if (i == j) v += r2 / (4.0 * t * t) - 1.0 / t;
      out(i, j) = v * g;
    }
  return out;
}

std::array<Mat3, 3> oseen_gradient_time_derivative(Vec3 x, double t) {
  require_time(t);
  double r2 = x.norm2();
  double g = heat_kernel_radial(std::sqrt(r2), t);
  double t2 = t * t, t3 = t2 * t;
  std::array<Mat3, 3> out;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double dkdtGamma = x[k] * (5.0 / (4.0 * t2) - r2 / (8.0 * t3));
        double third = x[i] * x[j] * x[k] / (8.0 * t3);
        third -= ((k == i ? x[j] : 0.0) + (k == j ? x[i] : 0.0) +
                  (i == j ? x[k] : 0.0)) /
                 (4.0 * t2);
        double v = (i == j ? dkdtGamma : 0.0) + third;
        out[k](i, j) = v * g;
      }
  return out;
}

Mat3 oseen_tensor_oracle(Vec3 x, double t) {
  require_time(t);
  double r = x.norm();
  if (r < 1e-12)
    throw KernelError("oseen_tensor_oracle: needs x != 0 (use closed form)");

  // psi(r) by radial quadrature of the Newtonian potential of Gamma.
  double feature = std::sqrt(t);
  auto psi = [&](double rr) {
    auto inner = [&](double s) { return s * s * heat_kernel_radial(s, t); };
    auto outer = [&](double s) { return s * heat_kernel_radial(s, t); };
    double tail = rr + 40.0 * std::sqrt(t);
    double inner_part = panel_simpson(inner, 0.0, rr, feature, 1e-15) / rr;
    double outer_part = panel_simpson(outer, rr, tail, feature, 1e-15);
    return inner_part + outer_part;
  };

  // Fourth-order centered differences with a Richardson pass.
  double h0 = 0.02 * std::min(r, std::sqrt(t));
  auto d1 = [&](double h) {
    return (psi(r - 2 * h) - 8 * psi(r - h) + 8 * psi(r + h) - psi(r + 2 * h)) /
           (12 * h);
  };
  auto d2 = [&](double h) {
    return (-psi(r - 2 * h) + 16 * psi(r - h) - 30 * psi(r) + 16 * psi(r + h) -
            psi(r + 2 * h)) /
           (12 * h * h);
  };
  double p1 = (16.0 * d1(h0 / 2) - d1(h0)) / 15.0;
  double p2 = (16.0 * d2(h0 / 2) - d2(h0)) / 15.0;

  double g = heat_kernel_radial(r, t);
  Vec3 xh = x / r;
  Mat3 s;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double v = xh[i] * xh[j] * p2 + (((i == j) ? 1.0 : 0.0) - xh[i] * xh[j]) * p1 / r;
      if (i == j) v += g;
      s(i, j) = v;
    }
  return s;
}

double heat_semigroup_convolution_oracle(double r, double t, double s) {
  require_time(t);
  require_time(s);
  // (f*g)(r) = (2 pi / r) int_0^inf a f(a) [ int_{|r-a|}^{r+a} w g(w) dw ] da
  // with the inner Gaussian moment in closed form.
  auto inner = [&](double lo, double hi) {
    return 2.0 * s *
           (std::exp(-lo * lo / (4.0 * s)) - std::exp(-hi * hi / (4.0 * s))) *
           std::pow(4.0 * kPi * s, -1.5);
  };
  auto outer = [&](double a) {
    return a * heat_kernel_radial(a, t) * inner(std::abs(r - a), r + a);
  };
  double hi = r + 40.0 * std::sqrt(t) + 40.0 * std::sqrt(s);
  double feature = std::min(std::sqrt(t), std::sqrt(s));
  return 2.0 * kPi / r * panel_simpson(outer, 0.0, hi, feature, 1e-16);
}

DecayScanReport decay_scan(int l, int k, const DecaySampleSpec& spec) {
  if ((l != 0 && l != 1) || (k != 0 && k != 1))
    throw KernelError("decay_scan: l, k must be in {0, 1}");
  if (spec.n_r < 2 || spec.n_t < 2 || spec.n_dir < 1)
    throw KernelError("decay_scan: empty sample set");

  static const Vec3 dirs[6] = {
      {1, 0, 0},
      {0, 1, 0},
      {0, 0, 1},
      {1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)},
      {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0},
      {0.267261241912424, -0.534522483824849, 0.801783725737273}};

  auto run = [&](int nr, int nt) {
    double best = 0.0;
    for (int ir = 0; ir < nr; ++ir) {
      double fr = (nr == 1) ? 0.0 : static_cast<double>(ir) / (nr - 1);
      double r = spec.r_lo * std::pow(spec.r_hi / spec.r_lo, fr);
      for (int it = 0; it < nt; ++it) {
        double ft = (nt == 1) ? 0.0 : static_cast<double>(it) / (nt - 1);
        double t = spec.t_lo * std::pow(spec.t_hi / spec.t_lo, ft);
        double w = std::pow(r + std::sqrt(t), 3.0 + l + 2.0 * k);
        for (int d = 0; d < std::min(spec.n_dir, 6); ++d) {
          Vec3 x = dirs[d] * r;
          double mag = 0.0;
          if (l == 0 && k == 0) {
            mag = oseen_tensor(x, t).max_abs();
          } else if (l == 1 && k == 0) {
            for (const Mat3& m : oseen_gradient(x, t))
              mag = std::max(mag, m.max_abs());
          } else if (l == 0 && k == 1) {
            mag = oseen_time_derivative(x, t).max_abs();
          } else {
            for (const Mat3& m : oseen_gradient_time_derivative(x, t))
              mag = std::max(mag, m.max_abs());
          }
          best = std::max(best, mag * w);
        }
      }
    }
    return best;
  };

  DecayScanReport rep;
  rep.l = l;
  rep.k = k;
  rep.weight_exponent = 3 + l + 2 * k;
  double c1 = run(spec.n_r, spec.n_t);
  double c2 = run(2 * spec.n_r, 2 * spec.n_t);
  rep.C_emp = c2;
  rep.n_samples = 2 * spec.n_r * 2 * spec.n_t * std::min(spec.n_dir, 6);
  rep.stability_pct = 100.0 * std::abs(c2 - c1) / c2;
  rep.stable = rep.stability_pct <= 10.0;
  return rep;
}

ScalarField newtonian_potential(const ScalarField& source, double rel_mean_tol) {
  return solve_poisson_neg(source, rel_mean_tol);
}

PowerFit fit_radial_decay(const VectorField& f, double r_lo, double r_hi,
                          int n_shells) {
  ScalarField mag = magnitude(f);
  const GridSpec& g = f.grid();
  int n = g.points_per_axis;
  PowerFit fit;
  std::vector<double> sum(n_shells, 0.0);
  std::vector<int> cnt(n_shells, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double r = g.node(i, j, k).norm();
        if (r < r_lo || r >= r_hi) continue;
        int sh = static_cast<int>((std::log(r) - std::log(r_lo)) /
                                  (std::log(r_hi) - std::log(r_lo)) * n_shells);
        sh = std::min(sh, n_shells - 1);
        sum[sh] += mag.at(g.index(i, j, k));
        cnt[sh] += 1;
      }
  // log-log least squares on shell averages
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int sh = 0; sh < n_shells; ++sh) {
    if (cnt[sh] == 0) continue;
    double rmid = r_lo * std::pow(r_hi / r_lo, (sh + 0.5) / n_shells);
    double v = sum[sh] / cnt[sh];
    if (v <= 0.0) continue;
    fit.shell_r.push_back(rmid);
    fit.shell_value.push_back(v);
    double lx = std::log(rmid), ly = std::log(v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m >= 2) {
    fit.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    fit.prefactor = std::exp((sy - fit.exponent * sx) / m);
  }
  return fit;
}

}  // namespace nslab
