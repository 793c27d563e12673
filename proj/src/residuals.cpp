#include "nslab/residuals.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "nslab/cutoffs.hpp"
#include "nslab/spectral.hpp"

namespace nslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---- batteries ------------------------------------------------------------

Battery make_battery(bool curl) {
  Battery b;
  b.id = curl ? "solenoidal-smoothstep-21" : "weak-smoothstep-21";
  const double scales[3] = {0.2, 0.4, 0.8};
  const Vec3 centers[7] = {{0, 0, 0},    {0.4, 0, 0},  {-0.4, 0, 0},
                           {0, 0.4, 0},  {0, -0.4, 0}, {0, 0, 0.4},
                           {0, 0, -0.4}};
  const double windows[3][4] = {{0.10, 0.30, 0.60, 0.90},
                                {0.05, 0.20, 0.50, 0.80},
                                {0.20, 0.40, 0.70, 0.95}};
  int k = 0;
  for (double s : scales)
    for (const Vec3& c : centers) {
      ZetaSpec z;
      z.center = c;
      z.scale = s;
      z.direction = k % 3;
      z.curl = curl;
      const double* w = windows[k % 3];
      z.t_on = w[0];
      z.t_full = w[1];
      z.t_down = w[2];
      z.t_off = w[3];
      b.members.push_back(z);
      ++k;
    }
  return b;
}

// time window w(t) and derivative
double window_value(const ZetaSpec& z, double t) {
  return smoothstep((t - z.t_on) / (z.t_full - z.t_on)) *
         (1.0 - smoothstep((t - z.t_down) / (z.t_off - z.t_down)));
}
double window_d1(const ZetaSpec& z, double t) {
  double up = smoothstep((t - z.t_on) / (z.t_full - z.t_on));
  double upd = smoothstep_d1((t - z.t_on) / (z.t_full - z.t_on)) /
               (z.t_full - z.t_on);
  double dn = smoothstep((t - z.t_down) / (z.t_off - z.t_down));
  double dnd = smoothstep_d1((t - z.t_down) / (z.t_off - z.t_down)) /
               (z.t_off - z.t_down);
  return upd * (1.0 - dn) - up * dnd;
}

// radial profile q(r) = 1 - smoothstep(r/scale) and derivatives
double q_value(const ZetaSpec& z, double r) {
  return 1.0 - smoothstep(r / z.scale);
}
double q_d1(const ZetaSpec& z, double r) {
  return -smoothstep_d1(r / z.scale) / z.scale;
}
double q_d2(const ZetaSpec& z, double r) {
  return -smoothstep_d2(r / z.scale) / (z.scale * z.scale);
}

// ---- analytic backend ------------------------------------------------------

// base radial moments: Q_m = int_0^1 (1 - psi(s)) s^{m+2} ds and
// B_m = int_0^1 psi'(s) s^{m+1} ds (for the curl profile q'(r)/r).
constexpr int kMaxMoment = 16;

double simpson_1d(const std::function<double(double)>& f, double a, double b,
                  int n) {
  double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

const std::vector<double>& base_moments_q() {
  static std::vector<double> m = [] {
    std::vector<double> v(kMaxMoment + 1);
    for (int k = 0; k <= kMaxMoment; ++k)
      v[k] = simpson_1d(
          [k](double s) { return (1.0 - smoothstep(s)) * std::pow(s, k + 2); },
          0.0, 1.0, 4096);
    return v;
  }();
  return m;
}

const std::vector<double>& base_moments_g() {
  static std::vector<double> m = [] {
    std::vector<double> v(kMaxMoment + 1);
    for (int k = 0; k <= kMaxMoment; ++k)
      v[k] = simpson_1d(
          [k](double s) { return smoothstep_d1(s) * std::pow(s, k + 1); }, 0.0,
          1.0, 4096);
    return v;
  }();
  return m;
}

double double_factorial(int n) {  // (-1)!! = 1
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

// int_{S^2} xhat^a yhat^b zhat^c dOmega
double angular_moment(int a, int b, int c) {
  if (a % 2 || b % 2 || c % 2) return 0.0;
  return 4.0 * kPi * double_factorial(a - 1) * double_factorial(b - 1) *
         double_factorial(c - 1) / double_factorial(a + b + c + 1);
}

// int P(y) profile(|y|) dy for polynomial P (already shifted to the center).
double poly_profile_integral(const Poly3& P, const ZetaSpec& z, bool g_profile) {
  const auto& base = g_profile ? base_moments_g() : base_moments_q();
  double acc = 0.0;
  for (const auto& [k, coeff] : P.terms()) {
    double ang = angular_moment(k[0], k[1], k[2]);
    if (ang == 0.0) continue;
    int m = k[0] + k[1] + k[2];
    if (m > kMaxMoment) throw FlowError("residuals: polynomial degree too high");
    // radial part: q: scale^{m+3} Q_m ; g = q'/r: -scale^{m+1} B_m
    double rad = g_profile ? -std::pow(z.scale, m + 1) * base[m]
                           : std::pow(z.scale, m + 3) * base[m];
    acc += coeff * ang * rad;
  }
  return acc;
}

// time integral int w(t) g(t) dt by moments of the window
double window_time_integral(const ZetaSpec& z, const TimePoly& g) {
  // adaptive enough: composite Simpson on [t_on, t_off]
  return simpson_1d([&](double t) { return window_value(z, t) * g.eval(t); },
                    z.t_on, z.t_off, 512);
}

// Separable strong-residual groups of a polynomial flow:
//   G1 = d_t u, G2 = -lap u, G3 = div(u (x) u), G4 = grad p.
struct StrongGroups {
  std::array<std::vector<SeparableTerm>, 3> g1, g2, g3, g4;
};

StrongGroups strong_groups(const PolyFlow& pf, double nonlinear_sign) {
  StrongGroups sg;
  for (int i = 0; i < 3; ++i) {
    for (const auto& term : pf.u[i]) {
      sg.g1[i].push_back({term.g.derivative(), term.f});
      sg.g2[i].push_back({term.g, term.f.laplacian() * (-1.0)});
    }
    // div(u u)_i = sum_j d_j (u_i u_j)
    for (const auto& ta : pf.u[i])
      for (int j = 0; j < 3; ++j)
        for (const auto& tb : pf.u[j])
          sg.g3[i].push_back(
              {ta.g * tb.g * nonlinear_sign, (ta.f * tb.f).derivative(j)});
    for (const auto& tp : pf.p)
      sg.g4[i].push_back({tp.g, tp.f.derivative(i)});
  }
  return sg;
}

// Weight polynomials of the test function by component: plain bump has
// W_i = delta_{i,d} with profile q; curl variant W_i = (y x e_d)_i with
// profile g = q'/r.
std::array<Poly3, 3> weight_polys(const ZetaSpec& z) {
  std::array<Poly3, 3> W;
  if (!z.curl) {
    W[z.direction] = Poly3::constant(1.0);
    return W;
  }
  Vec3 e{0, 0, 0};
  e[z.direction] = 1.0;
  // (y x e)_i = eps_{ikl} y_k e_l
  W[0] = Poly3::var(1) * e.z - Poly3::var(2) * e.y;
  W[1] = Poly3::var(2) * e.x - Poly3::var(0) * e.z;
  W[2] = Poly3::var(0) * e.y - Poly3::var(1) * e.x;
  return W;
}

// One group's contribution: sum_i int w g_k dt * int P_i(y+c) W_i profile dy.
double group_value(const std::array<std::vector<SeparableTerm>, 3>& grp,
                   const ZetaSpec& z) {
  std::array<Poly3, 3> W = weight_polys(z);
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (z.curl ? false : i != z.direction) continue;
    for (const auto& term : grp[i]) {
      Poly3 shifted = term.f.shift(z.center);
      Poly3 integrand = shifted * W[i];
      double space = poly_profile_integral(integrand, z, z.curl);
      if (space == 0.0) continue;
      acc += window_time_integral(z, term.g) * space;
    }
  }
  return acc;
}

ResidualReport analytic_report(const TestFlow& flow, const Battery& battery,
                               double tol, bool very_weak,
                               double nonlinear_sign) {
  if (!flow.poly)
    throw FlowError("analytic residual backend needs a polynomial flow");
  if (!very_weak && flow.poly->p.empty())
    throw FlowError("weak_residual: flow has no pressure terms");
  StrongGroups sg = strong_groups(*flow.poly, nonlinear_sign);
  ResidualReport rep;
  rep.flow = flow.name;
  rep.battery_id = battery.id;
  rep.tol = tol;
  rep.pass = true;
  std::vector<double> raws, scales;
  for (const auto& z : battery.members) {
    if (very_weak && !z.curl)
      throw FlowError("very_weak_residual: non-solenoidal test function");
    double v1 = group_value(sg.g1, z);
    double v2 = group_value(sg.g2, z);
    double v3 = group_value(sg.g3, z);
    double v4 = very_weak ? 0.0 : group_value(sg.g4, z);
    raws.push_back(std::abs(v1 + v2 + v3 + v4));
    scales.push_back(std::abs(v1) + std::abs(v2) + std::abs(v3) +
                     std::abs(v4));
  }
  // Members whose terms all vanish (by symmetry) normalize against the
  // battery-wide scale instead of their own roundoff noise.
  double max_scale = 0.0;
  for (double s : scales) max_scale = std::max(max_scale, s);
  for (std::size_t i = 0; i < raws.size(); ++i) {
    double denom = std::max(scales[i], 1e-8 * max_scale);
    double rel = (denom == 0.0) ? 0.0 : raws[i] / denom;
    rep.raw.push_back(raws[i]);
    rep.residuals.push_back(rel);
    if (rel > tol) rep.pass = false;
  }
  return rep;
}

// ---- grid backend ----------------------------------------------------------

struct SampledZeta {
  VectorField zeta;        // Z(x) spatial part
  VectorField lap_zeta;    // lap Z
  TensorField grad_zeta;   // d_i Z_j at (3*i+j)
  ScalarField div_zeta;
};

// Derivatives are taken spectrally from the sampled values. This keeps the
// rectangle-rule pairings exactly self-adjoint (sum v . lap(Z) equals
// sum lap(v) . Z in the discrete inner product), which is what makes the
// checker consistent for discrete stacks; pairing raw analytic derivatives
// with cell-scale features against the rectangle rule is not.
SampledZeta sample_zeta(const GridSpec& g, const ZetaSpec& z) {
  SampledZeta sz{VectorField(g), VectorField(g), TensorField(g),
                 ScalarField(g)};
  int n = g.points_per_axis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vec3 y = g.node(i, j, k) - z.center;
        double r = y.norm();
        std::size_t p = g.index(i, j, k);
        if (r >= z.scale) continue;
        if (!z.curl) {
          sz.zeta.at(p, z.direction) = q_value(z, r);
        } else {
          Vec3 e{0, 0, 0};
          e[z.direction] = 1.0;
          double q1 = q_d1(z, r), q2 = q_d2(z, r);
          double G = (r > 1e-14) ? q1 / r : q2;  // q'(r)/r -> q''(0)
          Vec3 w{y.y * e.z - y.z * e.y, y.z * e.x - y.x * e.z,
                 y.x * e.y - y.y * e.x};
          for (int c = 0; c < 3; ++c) sz.zeta.at(p, c) = G * w[c];
        }
      }
  sz.lap_zeta = laplacian(sz.zeta);
  for (int c = 0; c < 3; ++c) {
    ScalarField comp(g);
    std::copy(sz.zeta.component(c), sz.zeta.component(c) + g.point_count(),
              comp.raw().begin());
    for (int a = 0; a < 3; ++a) {
      ScalarField d = derivative(comp, a);
      std::copy(d.raw().begin(), d.raw().end(),
                sz.grad_zeta.raw().begin() + (3 * a + c) * g.point_count());
      if (a == c)
        for (std::size_t p = 0; p < g.point_count(); ++p)
          sz.div_zeta.at(p) += d.at(p);
    }
  }
  return sz;
}

ResidualReport grid_report(const VectorStack& u, const ScalarStack* p,
                           const Battery& battery, double tol,
                           bool very_weak) {
  u.validate();
  const GridSpec& g = u.grid();
  const TimeGrid& tg = u.time;
  if (tg.steps % 2 != 0)
    throw GridError("grid residual: Simpson rule needs an even step count");
  double dt = tg.dt();
  double vol = g.cell_volume();

  ResidualReport rep;
  rep.flow = "discrete";
  rep.battery_id = battery.id;
  rep.tol = tol;
  rep.pass = true;

  for (const auto& z : battery.members) {
    if (very_weak && !z.curl)
      throw GridError("very_weak_residual: non-solenoidal test function");
    if (z.scale < 3.0 * g.spacing())
      throw GridError("grid residual: test function support below three "
                      "cells; take a resolved_subset first");
    SampledZeta sz = sample_zeta(g, z);
    double term_dt = 0.0, term_lap = 0.0, term_adv = 0.0, term_p = 0.0;
    for (int m = 0; m < tg.nodes(); ++m) {
      double t = tg.node(m);
      double w = window_value(z, t), w1 = window_d1(z, t);
      double simp = (m == 0 || m == tg.nodes() - 1) ? 1.0
                    : (m % 2 == 1)                  ? 4.0
                                                    : 2.0;
      double wt = simp * dt / 3.0;
      const VectorField& um = u.frames[m];
      double a_dt = 0.0, a_lap = 0.0, a_adv = 0.0, a_p = 0.0;
      for (std::size_t q = 0; q < g.point_count(); ++q) {
        for (int c = 0; c < 3; ++c) {
          a_dt += um.at(q, c) * sz.zeta.at(q, c);
          a_lap += um.at(q, c) * sz.lap_zeta.at(q, c);
        }
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            a_adv += um.at(q, i) * um.at(q, j) * sz.grad_zeta.at(q, 3 * i + j);
        if (p) a_p += p->frames[m].at(q) * sz.div_zeta.at(q);
      }
      term_dt += wt * (-w1) * a_dt * vol;
      term_lap += wt * (-w) * a_lap * vol;
      term_adv += wt * (-w) * a_adv * vol;
      term_p += wt * (-w) * a_p * vol;
    }
    rep.raw.push_back(std::abs(term_dt + term_lap + term_adv + term_p));
    rep.residuals.push_back(std::abs(term_dt) + std::abs(term_lap) +
                            std::abs(term_adv) + std::abs(term_p));
  }
  // second pass: normalize with a battery-wide floor for symmetry-degenerate
  // members (all terms vanish up to roundoff)
  {
    double max_scale = 0.0;
    for (double s : rep.residuals) max_scale = std::max(max_scale, s);
    for (std::size_t i = 0; i < rep.raw.size(); ++i) {
      double denom = std::max(rep.residuals[i], 1e-8 * max_scale);
      rep.residuals[i] = (denom == 0.0) ? 0.0 : rep.raw[i] / denom;
      if (rep.residuals[i] > tol) rep.pass = false;
    }
  }
  return rep;
}

}  // namespace

Battery make_weak_battery() { return make_battery(false); }
Battery make_solenoidal_battery() { return make_battery(true); }

Battery resolved_subset(const Battery& b, const GridSpec& g,
                        double min_cells) {
  Battery out;
  out.id = b.id + "-resolved";
  for (const auto& z : b.members)
    if (z.scale >= min_cells * g.spacing()) out.members.push_back(z);
  if (out.members.empty())
    throw GridError("resolved_subset: no battery member is resolvable on "
                    "this grid");
  return out;
}

std::vector<PhiSpec> make_scalar_battery() {
  std::vector<PhiSpec> phis;
  const double scales[2] = {0.4, 0.8};
  const Vec3 centers[4] = {{0, 0, 0}, {0.4, 0, 0}, {0, -0.4, 0}, {0, 0, 0.4}};
  for (double s : scales)
    for (const Vec3& c : centers) phis.push_back({c, s});
  return phis;
}

ResidualReport weak_residual(const TestFlow& flow, const Battery& battery,
                             double tol) {
  return analytic_report(flow, battery, tol, false, 1.0);
}

ResidualReport very_weak_residual(const TestFlow& flow, const Battery& battery,
                                  double tol) {
  return analytic_report(flow, battery, tol, true, 1.0);
}

ResidualReport weak_residual_flipped(const TestFlow& flow,
                                     const Battery& battery, double tol) {
  return analytic_report(flow, battery, tol, false, -1.0);
}

ResidualReport very_weak_residual_flipped(const TestFlow& flow,
                                          const Battery& battery, double tol) {
  return analytic_report(flow, battery, tol, true, -1.0);
}

ResidualReport weak_residual_time_rule(const TestFlow& flow,
                                       const Battery& battery, int steps,
                                       double tol) {
  if (!flow.poly)
    throw FlowError("weak_residual_time_rule needs a polynomial flow");
  if (steps % 2 != 0)
    throw FlowError("weak_residual_time_rule: Simpson needs even steps");
  const PolyFlow& pf = *flow.poly;
  StrongGroups sg = strong_groups(pf, 1.0);

  ResidualReport rep;
  rep.flow = flow.name;
  rep.battery_id = battery.id + "-time-rule";
  rep.tol = tol;
  rep.pass = true;

  double dt = 1.0 / steps;
  std::vector<double> raws, scales;
  for (const auto& z : battery.members) {
    std::array<Poly3, 3> W = weight_polys(z);
    // exact space pairings, per component
    auto space_pairings = [&](const std::array<std::vector<SeparableTerm>, 3>&
                                  grp) {
      std::vector<std::pair<TimePoly, double>> out;
      for (int i = 0; i < 3; ++i) {
        if (!z.curl && i != z.direction) continue;
        for (const auto& term : grp[i]) {
          double space =
              poly_profile_integral(term.f.shift(z.center) * W[i], z, z.curl);
          if (space != 0.0) out.push_back({term.g, space});
        }
      }
      return out;
    };
    // the d_t group pairs u itself against -w'(t) zeta
    std::vector<std::pair<TimePoly, double>> u_pair;
    for (int i = 0; i < 3; ++i) {
      if (!z.curl && i != z.direction) continue;
      for (const auto& term : pf.u[i]) {
        double space =
            poly_profile_integral(term.f.shift(z.center) * W[i], z, z.curl);
        if (space != 0.0) u_pair.push_back({term.g, space});
      }
    }
    auto rest2 = space_pairings(sg.g2);
    auto rest3 = space_pairings(sg.g3);
    auto rest4 = z.curl ? decltype(rest2){} : space_pairings(sg.g4);

    double T1 = 0.0, Trest = 0.0, S1 = 0.0, Srest = 0.0;
    for (int m = 0; m <= steps; ++m) {
      double t = m * dt;
      double simp = (m == 0 || m == steps) ? 1.0 : ((m % 2) ? 4.0 : 2.0);
      double wt = simp * dt / 3.0;
      double a1 = 0.0;
      for (const auto& [gp, space] : u_pair) a1 += gp.eval(t) * space;
      T1 += wt * (-window_d1(z, t)) * a1;
      double ar = 0.0;
      for (const auto& [gp, space] : rest2) ar += gp.eval(t) * space;
      for (const auto& [gp, space] : rest3) ar += gp.eval(t) * space;
      for (const auto& [gp, space] : rest4) ar += gp.eval(t) * space;
      Trest += wt * window_value(z, t) * ar;
      S1 = std::max(S1, std::abs(T1));
      Srest = std::max(Srest, std::abs(Trest));
    }
    raws.push_back(std::abs(T1 + Trest));
    scales.push_back(std::abs(T1) + std::abs(Trest));
  }
  double max_scale = 0.0;
  for (double s : scales) max_scale = std::max(max_scale, s);
  for (std::size_t i = 0; i < raws.size(); ++i) {
    double denom = std::max(scales[i], 1e-8 * max_scale);
    double rel = (denom == 0.0) ? 0.0 : raws[i] / denom;
    rep.raw.push_back(raws[i]);
    rep.residuals.push_back(rel);
    if (rel > tol) rep.pass = false;
  }
  return rep;
}

ResidualReport weak_residual_grid(const VectorStack& u, const ScalarStack& p,
                                  const Battery& battery, double tol) {
  return grid_report(u, &p, battery, tol, false);
}

ResidualReport very_weak_residual_grid(const VectorStack& u,
                                       const Battery& battery, double tol) {
  return grid_report(u, nullptr, battery, tol, true);
}

std::vector<PhiSpec> make_offaxis_scalar_battery() {
  return {{{0.31, 0.22, -0.17}, 0.5},
          {{-0.42, 0.33, 0.28}, 0.7},
          {{0.12, -0.35, 0.41}, 0.6},
          {{0.55, 0.48, 0.37}, 0.8}};
}

ResidualReport forced_system_weak_residual(
    const VectorStack& v, const ScalarStack& q, const VectorStack& f0,
    const std::function<TensorField(int)>& F_fn, const Battery& battery,
    double tol) {
  v.validate();
  const GridSpec& g = v.grid();
  const TimeGrid& tg = v.time;
  if (tg.steps % 2 != 0)
    throw GridError("forced residual: Simpson rule needs an even step count");
  double dt = tg.dt();
  double vol = g.cell_volume();

  ResidualReport rep;
  rep.flow = "localized-system";
  rep.battery_id = battery.id;
  rep.tol = tol;
  rep.pass = true;

  // Frame-major outer loop so F frames are built once per frame.
  std::vector<SampledZeta> zs;
  zs.reserve(battery.members.size());
  for (const auto& z : battery.members) {
    if (z.curl)
      throw GridError("forced residual: plain-bump battery expected");
    if (z.scale < 3.0 * g.spacing())
      throw GridError("grid residual: test function support below three "
                      "cells; take a resolved_subset first");
    zs.push_back(sample_zeta(g, z));
  }
  std::size_t nz = battery.members.size();
  std::vector<double> t_dt(nz, 0.0), t_lap(nz, 0.0), t_q(nz, 0.0),
      t_f0(nz, 0.0), t_F(nz, 0.0);
  for (int m = 0; m < tg.nodes(); ++m) {
    double t = tg.node(m);
    double simp = (m == 0 || m == tg.nodes() - 1) ? 1.0
                  : (m % 2 == 1)                  ? 4.0
                                                  : 2.0;
    double wt = simp * dt / 3.0;
    TensorField F = F_fn(m);
    for (std::size_t zi = 0; zi < nz; ++zi) {
      const auto& z = battery.members[zi];
      const auto& sz = zs[zi];
      double w = window_value(z, t), w1 = window_d1(z, t);
      double a_dt = 0.0, a_lap = 0.0, a_q = 0.0, a_f0 = 0.0, a_F = 0.0;
      for (std::size_t p = 0; p < g.point_count(); ++p) {
        for (int c = 0; c < 3; ++c) {
          a_dt += v.frames[m].at(p, c) * sz.zeta.at(p, c);
          a_lap += v.frames[m].at(p, c) * sz.lap_zeta.at(p, c);
          a_f0 += f0.frames[m].at(p, c) * sz.zeta.at(p, c);
        }
        a_q += q.frames[m].at(p) * sz.div_zeta.at(p);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            a_F += F.at(p, 3 * i + j) * sz.grad_zeta.at(p, 3 * j + i);
      }
      t_dt[zi] += wt * (-w1) * a_dt * vol;
      t_lap[zi] += wt * (-w) * a_lap * vol;
      t_q[zi] += wt * (-w) * a_q * vol;
      t_f0[zi] += wt * (-w) * a_f0 * vol;
      t_F[zi] += wt * w * a_F * vol;
    }
  }
  std::vector<double> scales(nz);
  double max_scale = 0.0;
  for (std::size_t zi = 0; zi < nz; ++zi) {
    scales[zi] = std::abs(t_dt[zi]) + std::abs(t_lap[zi]) +
                 std::abs(t_q[zi]) + std::abs(t_f0[zi]) + std::abs(t_F[zi]);
    max_scale = std::max(max_scale, scales[zi]);
  }
  for (std::size_t zi = 0; zi < nz; ++zi) {
    double raw =
        std::abs(t_dt[zi] + t_lap[zi] + t_q[zi] + t_f0[zi] + t_F[zi]);
    double denom = std::max(scales[zi], 1e-8 * max_scale);
    double rel = (denom == 0.0) ? 0.0 : raw / denom;
    rep.raw.push_back(raw);
    rep.residuals.push_back(rel);
    if (rel > tol) rep.pass = false;
  }
  return rep;
}

DivergenceResidualReport divergence_residual(const VectorStack& u,
                                             const std::vector<PhiSpec>& phis) {
  u.validate();
  const GridSpec& g = u.grid();
  DivergenceResidualReport rep;
  for (const auto& phi : phis) {
    ScalarField sampled(g);
    int n = g.points_per_axis;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double r = (g.node(i, j, k) - phi.center).norm();
          sampled.at(g.index(i, j, k)) = 1.0 - smoothstep(r / phi.scale);
        }
    VectorField grad_phi = gradient(sampled);
    std::vector<double> per_frame;
    for (const auto& um : u.frames) {
      double acc = 0.0;
      for (std::size_t q = 0; q < g.point_count(); ++q)
        for (int c = 0; c < 3; ++c) acc += um.at(q, c) * grad_phi.at(q, c);
      acc *= g.cell_volume();
      per_frame.push_back(acc);
      rep.max_abs = std::max(rep.max_abs, std::abs(acc));
    }
    rep.residuals.push_back(std::move(per_frame));
  }
  return rep;
}

}  // namespace nslab
