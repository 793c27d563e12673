/// @file geometry.hpp
/// @brief Small fixed-size vector/tensor types used throughout the library.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace nslab {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return (&x)[i]; }
  double operator[](int i) const { return (&x)[i]; }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// 3x3 tensor, row-major: m(i,j) = data[3*i+j].
struct Mat3 {
  std::array<double, 9> data{};

  double& operator()(int i, int j) { return data[3 * i + j]; }
  double operator()(int i, int j) const { return data[3 * i + j]; }

  Mat3 operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.data[i] = data[i] + o.data[i];
    return r;
  }
  Mat3 operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.data[i] = data[i] - o.data[i];
    return r;
  }
  Mat3 operator*(double s) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.data[i] = data[i] * s;
    return r;
  }

  double trace() const { return data[0] + data[4] + data[8]; }
  double max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
  }
};

inline Mat3 operator*(double s, const Mat3& m) { return m * s; }

}  // namespace nslab
