/// @file test_flows_residuals.cpp
/// @brief Manufactured flows and the weak/very-weak/divergence residual
///        checkers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nslab/cutoffs.hpp"
#include "nslab/flows.hpp"
#include "nslab/lorentz.hpp"
#include "nslab/residuals.hpp"
#include "nslab/spectral.hpp"

using namespace nslab;

TEST_CASE("serrin flow: closed forms for h = x1 x2, g = t") {
  TestFlow fl = serrin_flow(TimePoly{0.0, 1.0}, Poly3::var(0) * Poly3::var(1));
  Vec3 x{0.3, -0.7, 0.2};
  double t = 0.5;
  Vec3 u = fl.velocity(x, t);
  CHECK(u.x == doctest::Approx(t * x.y));
  CHECK(u.y == doctest::Approx(t * x.x));
  CHECK(u.z == 0.0);
  double p = fl.pressure(x, t);
  double expect = -x.x * x.y - t * t * (x.x * x.x + x.y * x.y) / 2.0;
  CHECK(p == doctest::Approx(expect).epsilon(1e-14));
  CHECK(fl.divergence_free);

  // strong residual at sample points (symbolic cancellation verified at
  // construction; spot-check numerically on B_1)
  double h = 1e-5;
  for (Vec3 y : {Vec3{0.2, 0.1, -0.4}, Vec3{-0.6, 0.5, 0.3}}) {
    for (int i = 0; i < 3; ++i) {
      double dt_u = (fl.velocity(y, t + h)[i] - fl.velocity(y, t - h)[i]) /
                    (2 * h);
      double adv = 0.0;
      for (int j = 0; j < 3; ++j) {
        Vec3 yp = y, ym = y;
        yp[j] += h;
        ym[j] -= h;
        adv += fl.velocity(y, t)[j] *
               (fl.velocity(yp, t)[i] - fl.velocity(ym, t)[i]) / (2 * h);
      }
      Vec3 yp = y, ym = y;
      yp[i] += h;
      ym[i] -= h;
      double gradp = (fl.pressure(yp, t) - fl.pressure(ym, t)) / (2 * h);
      // laplacian of u vanishes (linear in x)
      CHECK(std::abs(dt_u + adv + gradp) < 1e-9);
    }
  }
}

TEST_CASE("serrin flow: h = x1 gives a constant-in-space velocity") {
  TestFlow fl = serrin_flow(TimePoly{0.0, 2.0}, Poly3::var(0));
  Vec3 u = fl.velocity({0.4, 0.5, -0.1}, 0.3);
  CHECK(u.x == doctest::Approx(0.6));
  CHECK(u.y == 0.0);
  double p = fl.pressure({0.4, 0.5, -0.1}, 0.3);
  // p = -g' x1 - g^2/2
  CHECK(p == doctest::Approx(-2.0 * 0.4 - 0.5 * 0.36).epsilon(1e-14));
}

TEST_CASE("serrin flow: non-harmonic h is rejected") {
  Poly3 bad = Poly3::var(0) * Poly3::var(0);  // lap = 2
  CHECK_THROWS_AS(serrin_flow(TimePoly{0.0, 1.0}, bad), FlowError);
  // degree-4 harmonic passes: h = x^3 y - x y^3? lap = 6xy - 6xy = 0
  Poly3 h4 = Poly3::var(0) * Poly3::var(0) * Poly3::var(0) * Poly3::var(1) -
             Poly3::var(0) * Poly3::var(1) * Poly3::var(1) * Poly3::var(1);
  CHECK_NOTHROW(serrin_flow(TimePoly{0.0, 1.0}, h4));
}

TEST_CASE("landau flow: homogeneity, shell residual, weak-L3 scale "
          "invariance") {
  TestFlow fl = landau_flow(2.0);
  CHECK(fl.homogeneity_degree == -1.0);
  Vec3 x{0.6, -0.2, 0.4};
  Vec3 u1 = fl.velocity(x, 0.0);
  Vec3 u2 = fl.velocity(x * 2.0, 0.0);
  for (int c = 0; c < 3; ++c)
    CHECK(u2[c] == doctest::Approx(0.5 * u1[c]).epsilon(1e-13));

  // stationary residual on the shell 0.5 < |x| < 2 (4th-order stencils)
  double h = 1e-3;
  double worst = 0.0, scale = 0.0;
  for (Vec3 y : {Vec3{0.7, 0.3, -0.4}, Vec3{-1.1, 0.9, 0.6},
                 Vec3{0.2, -1.4, 0.8}, Vec3{1.2, 1.2, -0.5}}) {
    for (int i = 0; i < 3; ++i) {
      double adv = 0.0, lap = 0.0;
      for (int j = 0; j < 3; ++j) {
        Vec3 yp = y, ym = y, yp2 = y, ym2 = y;
        yp[j] += h;
        ym[j] -= h;
        yp2[j] += 2 * h;
        ym2[j] -= 2 * h;
        double d1 = (-fl.velocity(yp2, 0)[i] + 8 * fl.velocity(yp, 0)[i] -
                     8 * fl.velocity(ym, 0)[i] + fl.velocity(ym2, 0)[i]) /
                    (12 * h);
        adv += fl.velocity(y, 0)[j] * d1;
        lap += (-fl.velocity(yp2, 0)[i] + 16 * fl.velocity(yp, 0)[i] -
                30 * fl.velocity(y, 0)[i] + 16 * fl.velocity(ym, 0)[i] -
                fl.velocity(ym2, 0)[i]) /
               (12 * h * h);
      }
      Vec3 yp = y, ym = y, yp2 = y, ym2 = y;
      yp[i] += h;
      ym[i] -= h;
      yp2[i] += 2 * h;
      ym2[i] -= 2 * h;
      double gradp = (-fl.pressure(yp2, 0) + 8 * fl.pressure(yp, 0) -
                      8 * fl.pressure(ym, 0) + fl.pressure(ym2, 0)) /
                     (12 * h);
      worst = std::max(worst, std::abs(adv - lap + gradp));
      scale = std::max(scale, std::abs(adv) + std::abs(lap) + std::abs(gradp));
    }
  }
  CHECK(worst / scale < 1e-6);

  // weak-L3 on B_2 equals that on B_4 within 1 percent ((-1)-homogeneous)
  GridSpec g = GridSpec{16.0, 64}.half_cell_shifted();
  VectorField uf = sample_vector(g, [&](Vec3 y) { return fl.velocity(y, 0); });
  double n2 = lorentz_norm(magnitude(uf), ball_mask(g, {0, 0, 0}, 2.0), 3.0,
                           kInf)
                  .value;
  double n4 = lorentz_norm(magnitude(uf), ball_mask(g, {0, 0, 0}, 4.0), 3.0,
                           kInf)
                  .value;
  CHECK(std::abs(n4 - n2) / n2 < 0.01);

  // norm monotone in the parameter (stronger flow for smaller A)
  TestFlow weaker = landau_flow(4.0);
  VectorField uw =
      sample_vector(g, [&](Vec3 y) { return weaker.velocity(y, 0); });
  double nw = lorentz_norm(magnitude(uw), ball_mask(g, {0, 0, 0}, 2.0), 3.0,
                           kInf)
                  .value;
  CHECK(nw < n2);
  CHECK_THROWS_AS(landau_flow(1.0), FlowError);
}

TEST_CASE("random solenoidal: divergence, determinism, shell confinement") {
  GridSpec g{8.0, 16};
  VectorField a = random_solenoidal(g, 42u, SpectrumSpec{2, 2, 1.0});
  CHECK(max_abs(divergence(a)) < 1e-12 * std::max(1.0, max_abs(a)));
  VectorField b = random_solenoidal(g, 42u, SpectrumSpec{2, 2, 1.0});
  for (std::size_t i = 0; i < a.raw().size(); ++i)
    CHECK(a.raw()[i] == b.raw()[i]);  // bit-for-bit

  // energy confined to the |n|^2 = 4 shell
  auto hat = to_spectrum(a);
  int n = g.points_per_axis;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) {
        auto sgn = [n](int m) { return (m < n / 2) ? m : m - n; };
        int nn = sgn(i) * sgn(i) + sgn(j) * sgn(j) + sgn(k) * sgn(k);
        if (nn != 4)
          for (int c = 0; c < 3; ++c)
            CHECK(std::abs(hat[c * g.point_count() + idx]) <
                  1e-10 * g.point_count());
      }
  CHECK_THROWS_AS(random_solenoidal(g, 1u, SpectrumSpec{1, 8, 1.0}),
                  FlowError);
}

TEST_CASE("weak residual: exact flow passes, zero flow is exactly zero") {
  TestFlow fl = serrin_flow(TimePoly{0.0, 1.0}, Poly3::var(0) * Poly3::var(1));
  Battery battery = make_weak_battery();
  CHECK(battery.members.size() >= 20);
  ResidualReport rep = weak_residual(fl, battery, 1e-6);
  CHECK(rep.pass);
  for (double r : rep.residuals) CHECK(r < 1e-9);

  TestFlow zero = serrin_flow(TimePoly{0.0, 0.0}, Poly3::var(0) * Poly3::var(1));
  ResidualReport zrep = weak_residual(zero, battery, 1e-6);
  for (double r : zrep.raw) CHECK(r == 0.0);
}

TEST_CASE("weak residual: adding a constant to the pressure changes nothing") {
  TestFlow fl = serrin_flow(TimePoly{0.0, 1.0}, Poly3::var(0) * Poly3::var(1));
  Battery battery = make_weak_battery();
  ResidualReport a = weak_residual(fl, battery, 1e-6);
  TestFlow shifted = fl;
  shifted.poly->p.push_back({TimePoly{1.0}, Poly3::constant(7.5)});
  ResidualReport b = weak_residual(shifted, battery, 1e-6);
  for (std::size_t i = 0; i < a.raw.size(); ++i)
    CHECK(a.raw[i] == doctest::Approx(b.raw[i]).epsilon(1e-9).scale(1e-9));
}

TEST_CASE("weak residual: perturbation grows linearly in delta") {
  Poly3 h = Poly3::var(0) * Poly3::var(1);
  Battery battery = make_weak_battery();
  auto perturbed = [&](double delta) {
    TestFlow fl = serrin_flow(TimePoly{0.0, 1.0}, h);
    // add delta * w with w = grad(x2 x3): keeps div u = 0 but breaks the
    // momentum balance
    Poly3 w = Poly3::var(1) * Poly3::var(2);
    for (int a = 0; a < 3; ++a)
      fl.poly->u[a].push_back({TimePoly{delta}, w.derivative(a)});
    double worst = 0.0;
    ResidualReport rep = weak_residual(fl, battery, 1.0);
    for (double r : rep.raw) worst = std::max(worst, r);
    return worst;
  };
  double r1 = perturbed(1e-3);
  double r2 = perturbed(2e-3);
  CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("very weak residual: solenoidal battery, no pressure needed") {
  TestFlow fl = serrin_flow(TimePoly{0.0, 1.0}, Poly3::var(0) * Poly3::var(1));
  Battery sol = make_solenoidal_battery();
  ResidualReport rep = very_weak_residual(fl, sol, 1e-6);
  CHECK(rep.pass);

  // flow without its pressure still passes (the term is invisible)
  TestFlow nop = fl;
  nop.poly->p.clear();
  nop.pressure = nullptr;
  CHECK(very_weak_residual(nop, sol, 1e-6).pass);

  // the non-solution (flipped nonlinearity) fails by a wide margin
  ResidualReport bad = very_weak_residual_flipped(fl, sol, 1e-6);
  CHECK_FALSE(bad.pass);
  double worst = 0.0;
  for (double r : bad.residuals) worst = std::max(worst, r);
  CHECK(worst > 1e-5);  // >= 10x tolerance

  // non-solenoidal members are rejected
  CHECK_THROWS_AS(very_weak_residual(fl, make_weak_battery(), 1e-6),
                  FlowError);
}

TEST_CASE("grid backend: discrete Serrin stacks pass at quadrature accuracy "
          "and refine in time at order >= 2") {
  GridSpec g{8.0, 32};
  TestFlow fl = serrin_flow(TimePoly{0.0, 1.0}, Poly3::var(0) * Poly3::var(1));
  Battery battery;
  battery.id = "single";
  ZetaSpec z;
  z.center = {0.2, 0.0, 0.0};
  z.scale = 0.8;
  z.direction = 0;
  battery.members.push_back(z);

  auto residual_at = [&](int steps) {
    TimeGrid tg{0.0, 1.0, steps};
    VectorStack u = fl.sample(g, tg);
    ScalarStack p = fl.sample_pressure(g, tg);
    ResidualReport rep = weak_residual_grid(u, p, battery, 1.0);
    return rep.residuals[0];
  };
  double e16 = residual_at(16);
  double e32 = residual_at(32);
  CHECK(std::log2(e16 / e32) >= 2.0);
  CHECK(e32 < 1e-4);
}

TEST_CASE("divergence residual: projected fields give exact zeros; "
          "div u = 1 integrates to -int(phi)") {
  GridSpec g{8.0, 24};
  TimeGrid tg{0.0, 1.0, 4};
  VectorStack u(tg, g);
  VectorField r = random_solenoidal(g, 9u, SpectrumSpec{1, 4, 1.0});
  for (auto& fr : u.frames) fr = r;
  auto phis = make_scalar_battery();
  DivergenceResidualReport rep = divergence_residual(u, phis);
  CHECK(rep.max_abs < 1e-11);

  // u = grad h, h harmonic: zero after integration by parts
  VectorStack uh(tg, g);
  for (auto& fr : uh.frames)
    fr = sample_vector(g, [](Vec3 x) { return Vec3{x.y, x.x, 0.0}; });
  CHECK(divergence_residual(uh, phis).max_abs < 1e-9);

  // u = (x1, 0, 0): residual = -int(phi) up to sawtooth leakage
  VectorStack ux(tg, g);
  for (auto& fr : ux.frames)
    fr = sample_vector(g, [](Vec3 x) { return Vec3{x.x, 0.0, 0.0}; });
  DivergenceResidualReport rep2 = divergence_residual(ux, phis);
  for (std::size_t i = 0; i < phis.size(); ++i) {
    ScalarField phi = sample_scalar(g, [&](Vec3 x) {
      double rr = (x - phis[i].center).norm();
      return 1.0 - smoothstep(rr / phis[i].scale);
    });
    double expect = -integrate(phi);
    CHECK(rep2.residuals[i][0] == doctest::Approx(expect).epsilon(0.02));
  }
}
