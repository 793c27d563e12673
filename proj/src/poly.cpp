#include "nslab/poly.hpp"

#include <cmath>

namespace nslab {

Poly3 Poly3::constant(double v) {
  Poly3 p;
  p.set({0, 0, 0}, v);
  return p;
}

Poly3 Poly3::var(int axis) {
  Poly3 p;
  Key k{0, 0, 0};
  k[axis] = 1;
  p.set(k, 1.0);
  return p;
}

void Poly3::set(Key k, double v) {
  if (v == 0.0)
    terms_.erase(k);
  else
    terms_[k] = v;
}

void Poly3::prune() {
  for (auto it = terms_.begin(); it != terms_.end();)
    it = (it->second == 0.0) ? terms_.erase(it) : std::next(it);
}

Poly3 Poly3::operator+(const Poly3& o) const {
  Poly3 r = *this;
  for (const auto& [k, v] : o.terms_) r.terms_[k] += v;
  r.prune();
  return r;
}

Poly3 Poly3::operator-(const Poly3& o) const {
  Poly3 r = *this;
  for (const auto& [k, v] : o.terms_) r.terms_[k] -= v;
  r.prune();
  return r;
}

Poly3 Poly3::operator*(const Poly3& o) const {
  Poly3 r;
  for (const auto& [ka, va] : terms_)
    for (const auto& [kb, vb] : o.terms_) {
      Key k{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]};
      r.terms_[k] += va * vb;
    }
  r.prune();
  return r;
}

Poly3 Poly3::operator*(double s) const {
  Poly3 r = *this;
  for (auto& [k, v] : r.terms_) v *= s;
  r.prune();
  return r;
}

Poly3 Poly3::derivative(int axis) const {
  Poly3 r;
  for (const auto& [k, v] : terms_) {
    if (k[axis] == 0) continue;
    Key kk = k;
    kk[axis] -= 1;
    r.terms_[kk] += v * k[axis];
  }
  r.prune();
  return r;
}

Poly3 Poly3::laplacian() const {
  return derivative(0).derivative(0) + derivative(1).derivative(1) +
         derivative(2).derivative(2);
}

double Poly3::eval(Vec3 x) const {
  double acc = 0.0;
  for (const auto& [k, v] : terms_)
    acc += v * std::pow(x.x, k[0]) * std::pow(x.y, k[1]) * std::pow(x.z, k[2]);
  return acc;
}

namespace {
double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}
}  // namespace

Poly3 Poly3::shift(Vec3 c) const {
  Poly3 r;
  for (const auto& [k, v] : terms_) {
    // (y+cx)^a (z+cy)^b ... expand per axis
    for (int a = 0; a <= k[0]; ++a)
      for (int b = 0; b <= k[1]; ++b)
        for (int d = 0; d <= k[2]; ++d) {
          double coeff = v * binom(k[0], a) * std::pow(c.x, k[0] - a) *
                         binom(k[1], b) * std::pow(c.y, k[1] - b) *
                         binom(k[2], d) * std::pow(c.z, k[2] - d);
          Key kk{a, b, d};
          r.terms_[kk] += coeff;
        }
  }
  r.prune();
  return r;
}

int Poly3::degree() const {
  int d = 0;
  for (const auto& [k, v] : terms_) d = std::max(d, k[0] + k[1] + k[2]);
  return d;
}

bool Poly3::is_zero(double tol) const {
  for (const auto& [k, v] : terms_)
    if (std::abs(v) > tol) return false;
  return true;
}

double Poly3::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [k, v] : terms_) m = std::max(m, std::abs(v));
  return m;
}

double TimePoly::eval(double t) const {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * t + coeffs[i];
  return acc;
}

TimePoly TimePoly::derivative() const {
  TimePoly r;
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    r.coeffs.push_back(coeffs[i] * static_cast<double>(i));
  return r;
}

TimePoly TimePoly::operator*(const TimePoly& o) const {
  TimePoly r;
  if (coeffs.empty() || o.coeffs.empty()) return r;
  r.coeffs.assign(coeffs.size() + o.coeffs.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs.size(); ++j)
      r.coeffs[i + j] += coeffs[i] * o.coeffs[j];
  return r;
}

TimePoly TimePoly::operator*(double s) const {
  TimePoly r = *this;
  for (double& c : r.coeffs) c *= s;
  return r;
}

bool TimePoly::is_zero(double tol) const {
  for (double c : coeffs)
    if (std::abs(c) > tol) return false;
  return true;
}

}  // namespace nslab
