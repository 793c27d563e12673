#include "nslab/cutoffs.hpp"

#include <cmath>

namespace nslab {

namespace {

double bump_a(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double bump_a1(double s) { return s > 0.0 ? bump_a(s) / (s * s) : 0.0; }
double bump_a2(double s) {
  if (s <= 0.0) return 0.0;
  double a = bump_a(s);
  return a * (1.0 / (s * s * s * s) - 2.0 / (s * s * s));
}

}  // namespace

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  double a = bump_a(s), b = bump_a(1.0 - s);
  return a / (a + b);
}

double smoothstep_d1(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  double a = bump_a(s), b = bump_a(1.0 - s);
  double a1 = bump_a1(s), b1 = -bump_a1(1.0 - s);
  double D = a + b;
  return (a1 * D - a * (a1 + b1)) / (D * D);
}

double smoothstep_d2(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  double a = bump_a(s), b = bump_a(1.0 - s);
  double a1 = bump_a1(s), b1 = -bump_a1(1.0 - s);
  double a2 = bump_a2(s), b2 = bump_a2(1.0 - s);
  double D = a + b, D1 = a1 + b1, D2 = a2 + b2;
  return a2 / D - (2.0 * a1 * D1 + a * D2) / (D * D) +
         2.0 * a * D1 * D1 / (D * D * D);
}

double RadialCutoff::value(double r) const {
  return 1.0 - smoothstep((r - r_inner) / (r_outer - r_inner));
}

double RadialCutoff::d1(double r) const {
  double w = r_outer - r_inner;
  return -smoothstep_d1((r - r_inner) / w) / w;
}

double RadialCutoff::d2(double r) const {
  double w = r_outer - r_inner;
  return -smoothstep_d2((r - r_inner) / w) / (w * w);
}

Vec3 RadialCutoff::gradient(Vec3 x) const {
  double r = x.norm();
  if (r < 1e-300) return {0.0, 0.0, 0.0};
  return x * (d1(r) / r);
}

double RadialCutoff::laplacian(Vec3 x) const {
  double r = x.norm();
  if (r <= r_inner || r >= r_outer) return 0.0;
  return d2(r) + 2.0 * d1(r) / r;
}

double TimeCutoff::value(double t) const {
  return smoothstep((t - t_on) / (t_full - t_on));
}

double TimeCutoff::d1(double t) const {
  double w = t_full - t_on;
  return smoothstep_d1((t - t_on) / w) / w;
}

}  // namespace nslab
