/// @file poly.hpp
/// @brief Small exact polynomial types: trivariate polynomials in x and
///        univariate polynomials in t. Used for manufactured flows and the
///        semi-analytic residual quadrature.
#pragma once

#include <array>
#include <map>
#include <vector>

#include "nslab/geometry.hpp"

namespace nslab {

/// Trivariate polynomial with double coefficients, exact for integer inputs.
class Poly3 {
 public:
  using Key = std::array<int, 3>;  // exponents (a, b, c) of x^a y^b z^c

  Poly3() = default;
  static Poly3 constant(double v);
  static Poly3 var(int axis);

  Poly3 operator+(const Poly3& o) const;
  Poly3 operator-(const Poly3& o) const;
  Poly3 operator*(const Poly3& o) const;
  Poly3 operator*(double s) const;

  Poly3 derivative(int axis) const;
  Poly3 laplacian() const;

  double eval(Vec3 x) const;
  /// Polynomial in y with q(y) = p(y + c) (binomial expansion).
  Poly3 shift(Vec3 c) const;

  int degree() const;
  bool is_zero(double tol = 0.0) const;
  double max_abs_coeff() const;

  const std::map<Key, double>& terms() const { return terms_; }
  void set(Key k, double v);

 private:
  void prune();
  std::map<Key, double> terms_;
};

/// Polynomial in t: coeffs[k] t^k.
struct TimePoly {
  std::vector<double> coeffs;

  TimePoly() = default;
  TimePoly(std::initializer_list<double> c) : coeffs(c) {}

  double eval(double t) const;
  TimePoly derivative() const;
  TimePoly operator*(const TimePoly& o) const;
  TimePoly operator*(double s) const;
  bool is_zero(double tol = 0.0) const;
};

}  // namespace nslab
