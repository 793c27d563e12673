/// @file test_kernels.cpp
/// @brief Heat kernel, Oseen tensor closed forms vs the quadrature oracle,
///        derivative identities, decay scans.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nslab/kernels.hpp"
#include "nslab/spectral.hpp"

using namespace nslab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("heat kernel: normalization points") {
  CHECK(heat_kernel({0, 0, 0}, 1.0 / (4.0 * kPi)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  double t = 0.37;
  Vec3 x{2.0 * std::sqrt(t), 0, 0};  // |x|^2 = 4t
  CHECK(heat_kernel(x, t) ==
        doctest::Approx(std::pow(4.0 * kPi * t, -1.5) / std::numbers::e)
            .epsilon(1e-14));
  CHECK_THROWS_AS(heat_kernel({1, 0, 0}, 0.0), KernelError);
  CHECK_THROWS_AS(heat_kernel({1, 0, 0}, -1.0), KernelError);
}

TEST_CASE("gaussian potential solves -lap psi = Gamma (radial identity)") {
  double t = 0.25;
  for (double r : {0.3, 0.9, 2.2}) {
    double h = 1e-4;
    auto psi = [&](double rr) { return gaussian_potential(rr, t); };
    double lap = (psi(r + h) - 2 * psi(r) + psi(r - h)) / (h * h) +
                 (psi(r + h) - psi(r - h)) / (h * r);
    CHECK(lap == doctest::Approx(-heat_kernel_radial(r, t)).epsilon(1e-5));
  }
}

TEST_CASE("oseen tensor: symmetry and trace law") {
  Vec3 x{1.0, 0.5, -0.3};
  double t = 0.25;
  Mat3 s = oseen_tensor(x, t);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(s(i, j) == doctest::Approx(s(j, i)).epsilon(1e-14));

  // trace = 2 Gamma, cross-checked against a numeric Laplacian of psi
  Vec3 y{1.0, 0, 0};
  Mat3 s2 = oseen_tensor(y, t);
  CHECK(s2.trace() ==
        doctest::Approx(2.0 * heat_kernel(y, t)).epsilon(1e-12));
  double h = 1e-4, r = 1.0;
  auto psi = [&](double rr) { return gaussian_potential(rr, t); };
  double lap_psi = (psi(r + h) - 2 * psi(r) + psi(r - h)) / (h * h) +
                   (psi(r + h) - psi(r - h)) / (h * r);
  CHECK(s2.trace() ==
        doctest::Approx(3.0 * heat_kernel(y, t) + lap_psi).epsilon(1e-5));
}

TEST_CASE("oseen tensor: continuity at x = 0 and the isotropic limit") {
  double t = 0.4;
  Mat3 s0 = oseen_tensor({0, 0, 0}, t);
  double expect = 2.0 / 3.0 * heat_kernel({0, 0, 0}, t);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(s0(i, j) == doctest::Approx(i == j ? expect : 0.0).epsilon(1e-13));
  // series/closed-form consistency across the switch point
  for (double rho : {0.6, 0.7, 0.8}) {
    double r = 2.0 * std::sqrt(t) * rho;
    Mat3 a = oseen_tensor({r, 0, 0}, t);
    CHECK(a.trace() ==
          doctest::Approx(2.0 * heat_kernel({r, 0, 0}, t)).epsilon(1e-12));
  }
}

TEST_CASE("oseen closed form agrees with the radial quadrature oracle") {
  Mat3 c = oseen_tensor({1, 0, 0}, 1.0);
  Mat3 o = oseen_tensor_oracle({1, 0, 0}, 1.0);
  CHECK((c - o).max_abs() / c.max_abs() < 1e-6);

  for (int s = 0; s < 8; ++s) {
    double r = 0.3 * std::pow(8.0, s / 7.0);
    double t = 0.05 * std::pow(20.0, ((3 * s) % 8) / 7.0);
    Vec3 x{0.8 * r, 0.36 * r, -0.48 * r};
    Mat3 cc = oseen_tensor(x, t);
    Mat3 oo = oseen_tensor_oracle(x, t);
    CHECK((cc - oo).max_abs() / cc.max_abs() < 1e-6);
  }
}

TEST_CASE("oseen gradient: parity, finite differences, row divergence") {
  Vec3 x{1.0, -0.4, 0.7};
  double t = 0.6;
  auto g = oseen_gradient(x, t);
  auto gm = oseen_gradient(-x, t);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 9; ++i)
      CHECK(g[k].data[i] == doctest::Approx(-gm[k].data[i]).epsilon(1e-12));

  // centered differences of the closed form at step 1e-3
  double h = 1e-3;
  auto g1 = oseen_gradient({1, 0, 0}, 1.0);
  for (int k = 0; k < 3; ++k) {
    Vec3 xp{1, 0, 0}, xm{1, 0, 0};
    xp[k] += h;
    xm[k] -= h;
    Mat3 fd = (oseen_tensor(xp, 1.0) - oseen_tensor(xm, 1.0)) * (0.5 / h);
    for (int i = 0; i < 9; ++i)
      CHECK(g1[k].data[i] == doctest::Approx(fd.data[i]).epsilon(1e-5));
  }

  // sum_j d_j S_ij = 0 for the closed form
  for (double tt : {0.1, 1.0}) {
    auto gg = oseen_gradient(x, tt);
    double scale = oseen_tensor(x, tt).max_abs();
    for (int i = 0; i < 3; ++i) {
      double div = gg[0](i, 0) + gg[1](i, 1) + gg[2](i, 2);
      CHECK(std::abs(div) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("oseen time derivative: finite-difference agreement") {
  Vec3 x{0.8, 0.3, -0.2};
  double t = 0.5, h = 1e-5;
  Mat3 dt = oseen_time_derivative(x, t);
  Mat3 fd = (oseen_tensor(x, t + h) - oseen_tensor(x, t - h)) * (0.5 / h);
  for (int i = 0; i < 9; ++i)
    CHECK(dt.data[i] == doctest::Approx(fd.data[i]).epsilon(1e-6));

  auto gdt = oseen_gradient_time_derivative(x, t);
  for (int k = 0; k < 3; ++k) {
    Vec3 xp = x, xm = x;
    xp[k] += 1e-4;
    xm[k] -= 1e-4;
    Mat3 fdk = (oseen_time_derivative(xp, t) - oseen_time_derivative(xm, t)) *
               (0.5 / 1e-4);
    for (int i = 0; i < 9; ++i)
      CHECK(gdt[k].data[i] == doctest::Approx(fdk.data[i]).epsilon(1e-5));
  }
}

TEST_CASE("parabolic scaling: S(lambda x, lambda^2 t) = lambda^-3 S(x, t)") {
  Vec3 x{1, 0, 0};
  double t = 0.5, lam = 2.0;
  Mat3 a = oseen_tensor(x * lam, t * lam * lam);
  Mat3 b = oseen_tensor(x, t) * std::pow(lam, -3.0);
  for (int i = 0; i < 9; ++i)
    CHECK(a.data[i] == doctest::Approx(b.data[i]).epsilon(1e-13));
}

TEST_CASE("heat semigroup convolution oracle: Gamma_t * Gamma_s = Gamma_{t+s}") {
  struct Pt {
    double r, t, s;
  };
  const Pt pts[] = {{0.5, 0.3, 0.2}, {1.0, 0.1, 0.5}, {2.0, 0.7, 0.7},
                    {0.2, 0.05, 0.1}, {1.5, 0.4, 0.05}, {3.0, 1.0, 0.5},
                    {0.8, 0.2, 0.9}, {1.2, 0.6, 0.3}, {2.5, 0.8, 0.4},
                    {0.35, 0.15, 0.25}};
  for (const Pt& p : pts) {
    double conv = heat_semigroup_convolution_oracle(p.r, p.t, p.s);
    double expect = heat_kernel_radial(p.r, p.t + p.s);
    CHECK(std::abs(conv - expect) / expect < 1e-6);
  }
}

TEST_CASE("decay scans: C_emp finite and stable, all four (l,k) pairs") {
  DecaySampleSpec spec;
  for (int l = 0; l <= 1; ++l)
    for (int k = 0; k <= 1; ++k) {
      DecayScanReport rep = decay_scan(l, k, spec);
      CHECK(rep.weight_exponent == 3 + l + 2 * k);
      CHECK(std::isfinite(rep.C_emp));
      CHECK(rep.C_emp > 0.0);
      CHECK(rep.stable);
    }
  CHECK_THROWS_AS(decay_scan(2, 0, spec), KernelError);
}

TEST_CASE("gradient magnitude bounded by the scanned constant") {
  DecaySampleSpec spec;
  DecayScanReport rep = decay_scan(1, 0, spec);
  Vec3 x{2, 0, 0};
  double t = 1.0;
  double w = std::pow(x.norm() + std::sqrt(t), 4.0);
  double mag = 0.0;
  for (const Mat3& m : oseen_gradient(x, t)) mag = std::max(mag, m.max_abs());
  CHECK(mag * w <= rep.C_emp * (1.0 + 1e-9));
}

TEST_CASE("periodic newtonian potential: multiplier and rejection") {
  GridSpec g{8.0, 16};
  double k = 2.0 * kPi / g.box_side;
  ScalarField src = sample_scalar(g, [&](Vec3 x) { return std::sin(k * x.x); });
  ScalarField eta = newtonian_potential(src);
  double expect = std::pow(g.box_side / (2.0 * kPi), 2.0);
  for (int i = 0; i < 16; ++i)
    CHECK(eta.at(i, 4, 7) ==
          doctest::Approx(expect * std::sin(k * g.coord(0, i))).epsilon(1e-12));
  ScalarField lap = laplacian(eta);
  for (std::size_t p = 0; p < src.raw().size(); ++p)
    CHECK(lap.at(p) + src.at(p) == doctest::Approx(0.0).epsilon(1e-10));

  ScalarField bad = sample_scalar(g, [](Vec3) { return 1.0; });
  CHECK_THROWS_WITH_AS(newtonian_potential(bad),
                       doctest::Contains("not mean-zero"), GridError);
}
