/// @file flows.hpp
/// @brief Analytic and manufactured test flows: gradient-of-harmonic flows
///        u = g(t) grad h(x), the stationary (-1)-homogeneous jet family,
///        and seeded band-limited solenoidal random fields.
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "nslab/grid.hpp"
#include "nslab/poly.hpp"

namespace nslab {

class FlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One separable term g(t) f(x) of a velocity component or pressure.
struct SeparableTerm {
  TimePoly g;
  Poly3 f;
};

/// Polynomial structure of a flow (sum of separable terms per component);
/// drives the semi-analytic residual quadrature.
struct PolyFlow {
  std::array<std::vector<SeparableTerm>, 3> u;
  std::vector<SeparableTerm> p;
};

struct TestFlow {
  std::string name;
  std::function<Vec3(Vec3, double)> velocity;
  std::function<double(Vec3, double)> pressure;  // may be empty
  std::optional<PolyFlow> poly;  // set for polynomial flows
  bool divergence_free = false;
  double homogeneity_degree = std::numeric_limits<double>::quiet_NaN();

  VectorStack sample(const GridSpec& g, const TimeGrid& tg) const;
  ScalarStack sample_pressure(const GridSpec& g, const TimeGrid& tg) const;
};

/// u = g(t) grad h, p = -g'(t) h - g(t)^2 |grad h|^2 / 2. Requires h
/// harmonic (checked symbolically, exact); the strong residual cancels
/// symbolically and the cancellation is verified at construction.
TestFlow serrin_flow(const TimePoly& g, const Poly3& h);

/// Stationary (-1)-homogeneous axisymmetric jet with parameter A > 1
/// (closed form; smaller A means a stronger flow). Singular at the origin;
/// sample on half-cell-shifted grids.
TestFlow landau_flow(double A);

struct SpectrumSpec {
  int shell_lo = 1;   // keep modes with shell_lo^2 <= |n|^2 <= shell_hi^2
  int shell_hi = 3;
  double amplitude = 1.0;
};

/// Leray-projected band-limited random field; bit-reproducible per seed.
VectorField random_solenoidal(const GridSpec& g, std::uint64_t seed,
                              const SpectrumSpec& spec);

}  // namespace nslab
