#include "nslab/localization.hpp"

#include <cmath>

#include "nslab/lorentz.hpp"
#include "nslab/spectral.hpp"

namespace nslab {

SampledCutoffs::SampledCutoffs(const GridSpec& g, const CutoffFamily& cut)
    : phi0(g), grad_phi0(g), lap_phi0(g), phi_tilde(g), family(cut) {
  int n = g.points_per_axis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vec3 x = g.node(i, j, k);
        std::size_t p = g.index(i, j, k);
        double r = x.norm();
        phi0.at(p) = cut.phi0.value(r);
        Vec3 gp = cut.phi0.gradient(x);
        for (int c = 0; c < 3; ++c) grad_phi0.at(p, c) = gp[c];
        lap_phi0.at(p) = cut.phi0.laplacian(x);
        phi_tilde.at(p) = cut.phi_tilde.value(r);
      }
}

ScalarStack eta_correction(const VectorStack& u, const SampledCutoffs& cut,
                           double rel_mean_tol) {
  u.validate();
  const GridSpec& g = u.grid();
  ScalarStack eta(u.time, g);
  for (int m = 0; m < u.time.nodes(); ++m) {
    double th = cut.family.theta.value(u.time.node(m));
    if (th == 0.0) continue;  // source vanishes, eta stays zero
    ScalarField src(g);
    for (std::size_t p = 0; p < g.point_count(); ++p) {
      double s = 0.0;
      for (int c = 0; c < 3; ++c)
        s += cut.grad_phi0.at(p, c) * u.frames[m].at(p, c);
      src.at(p) = th * s;
    }
    eta.frames[m] = solve_poisson_neg(src, rel_mean_tol);
  }
  return eta;
}

VectorField f0_frame(const VectorField& u_m, const ScalarField& p_m, double t,
                     const SampledCutoffs& cut) {
  const GridSpec& g = u_m.grid();
  double th = cut.family.theta.value(t);
  double thd = cut.family.theta.d1(t);
  VectorField out(g);
  for (std::size_t p = 0; p < g.point_count(); ++p) {
    double phi_t = thd * cut.phi0.at(p);
    double lap_phi = th * cut.lap_phi0.at(p);
    double gradphi_dot_u = 0.0;
    for (int c = 0; c < 3; ++c)
      gradphi_dot_u += th * cut.grad_phi0.at(p, c) * u_m.at(p, c);
    for (int c = 0; c < 3; ++c)
      out.at(p, c) = u_m.at(p, c) * (phi_t + lap_phi) +
                     p_m.at(p) * th * cut.grad_phi0.at(p, c) +
                     gradphi_dot_u * u_m.at(p, c);
  }
  return out;
}

TensorField f1_frame(const VectorField& u_m, const ScalarField& eta_m, double t,
                     const SampledCutoffs& cut) {
  const GridSpec& g = u_m.grid();
  double th = cut.family.theta.value(t);
  VectorField grad_eta = gradient(eta_m);
  TensorField out(g);
  for (std::size_t p = 0; p < g.point_count(); ++p)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        out.at(p, 3 * i + j) =
            -2.0 * th * cut.grad_phi0.at(p, j) * u_m.at(p, i) +
            grad_eta.at(p, j) * cut.phi_tilde.at(p) * u_m.at(p, i);
  return out;
}

TensorField f2_frame(const VectorField& u_m, const VectorField& v_m,
                     const SampledCutoffs& cut) {
  const GridSpec& g = u_m.grid();
  TensorField out(g);
  for (std::size_t p = 0; p < g.point_count(); ++p) {
    double pt = cut.phi_tilde.at(p);
    if (pt == 0.0) continue;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        out.at(p, 3 * i + j) = -pt * u_m.at(p, i) * v_m.at(p, j);
  }
  return out;
}

LocalizedState localize(const VectorStack& u, const ScalarStack& p,
                        const SampledCutoffs& cut) {
  u.validate();
  p.validate();
  if (!(u.time == p.time)) throw GridError("localize: time grid mismatch");
  const GridSpec& g = u.grid();
  if (!(p.grid() == g)) throw GridError("localize: grid mismatch");
  int M = u.time.nodes();
  if (M < 8)
    throw GridError("localize: time grid too coarse for d_t eta (need >= 8 "
                    "frames)");
  double dt = u.time.dt();

  LocalizedState st;
  st.eta = eta_correction(u, cut);
  st.utilde = VectorStack(u.time, g);
  st.ptilde = ScalarStack(u.time, g);
  st.f0 = VectorStack(u.time, g);
  st.f1 = TensorStack(u.time, g);

  for (int m = 0; m < M; ++m) {
    double t = u.time.node(m);
    double th = cut.family.theta.value(t);

    VectorField grad_eta = gradient(st.eta.frames[m]);
    for (std::size_t q = 0; q < g.point_count(); ++q) {
      double phi = th * cut.phi0.at(q);
      for (int c = 0; c < 3; ++c)
        st.utilde.frames[m].at(q, c) =
            phi * u.frames[m].at(q, c) + grad_eta.at(q, c);
    }

    // d_t eta: centered, second-order one-sided at the ends.
    ScalarField dteta(g);
    const auto& e = st.eta.frames;
    for (std::size_t q = 0; q < g.point_count(); ++q) {
      double v;
      if (m == 0)
        v = (-3.0 * e[0].at(q) + 4.0 * e[1].at(q) - e[2].at(q)) / (2.0 * dt);
      else if (m == M - 1)
        v = (3.0 * e[M - 1].at(q) - 4.0 * e[M - 2].at(q) + e[M - 3].at(q)) /
            (2.0 * dt);
      else
        v = (e[m + 1].at(q) - e[m - 1].at(q)) / (2.0 * dt);
      dteta.at(q) = v;
    }
    ScalarField lap_eta = laplacian(st.eta.frames[m]);
    for (std::size_t q = 0; q < g.point_count(); ++q)
      st.ptilde.frames[m].at(q) =
          th * cut.phi0.at(q) * p.frames[m].at(q) - dteta.at(q) +
          lap_eta.at(q);

    st.f0.frames[m] = f0_frame(u.frames[m], p.frames[m], t, cut);
    st.f1.frames[m] = f1_frame(u.frames[m], st.eta.frames[m], t, cut);
  }
  return st;
}

SupportAuditReport forcing_support_audit(const LocalizedState& state,
                                         double m_exponent) {
  const GridSpec& g = state.f0.grid();
  SupportAuditReport rep;
  rep.m_exponent = m_exponent;
  int n = g.points_per_axis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (g.node(i, j, k).norm() < rep.support_radius) continue;
        std::size_t p = g.index(i, j, k);
        for (const auto& fr : state.f0.frames)
          for (int c = 0; c < 3; ++c)
            rep.max_f0_outside =
                std::max(rep.max_f0_outside, std::abs(fr.at(p, c)));
        for (const auto& fr : state.f1.frames)
          for (int c = 0; c < 9; ++c)
            rep.max_f1_outside =
                std::max(rep.max_f1_outside, std::abs(fr.at(p, c)));
      }
  rep.pass = rep.max_f0_outside == 0.0 && rep.max_f1_outside == 0.0;

  // || f0 ||_{L^m(0,1; L^1 cap L^{3/2,inf})}: intersection norm is the max
  // of the two norms, combined by the trapezoid L^m rule over frames.
  ScalarField mask = box_mask(g);
  double dt = state.f0.time.dt();
  double acc = 0.0;
  int M = state.f0.time.nodes();
  for (int m = 0; m < M; ++m) {
    ScalarField mag = magnitude(state.f0.frames[m]);
    double l1 = integrate(mag);
    double lw = lorentz_norm(mag, mask, 1.5, kInf).value;
    double v = std::max(l1, lw);
    double w = (m == 0 || m == M - 1) ? 0.5 : 1.0;
    acc += w * std::pow(v, m_exponent);
  }
  rep.f0_l1_linf_m_norm = std::pow(acc * dt, 1.0 / m_exponent);
  return rep;
}

}  // namespace nslab
