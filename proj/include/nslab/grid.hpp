/// @file grid.hpp
/// @brief Periodic box grids, scalar/vector/tensor fields, and space-time
///        field stacks, together with sampling, integration, masking and
///        rescaling primitives.
///
/// Conventions: the box is [-L/2, L/2)^3 shifted by an origin offset; grid
/// nodes are cell centers, x_i = -L/2 + i*h + offset with h = L/N. A field
/// value represents its cell, so the rectangle rule h^3 * sum is the
/// integral of the piecewise-constant cell representative (and is spectrally
/// accurate for smooth periodic integrands).
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nslab/geometry.hpp"

namespace nslab {

class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  double box_side = 8.0;
  int points_per_axis = 48;
  std::array<double, 3> origin_offset{0.0, 0.0, 0.0};

  double spacing() const { return box_side / points_per_axis; }
  double cell_volume() const {
    double h = spacing();
    return h * h * h;
  }
  std::size_t point_count() const {
    auto n = static_cast<std::size_t>(points_per_axis);
    return n * n * n;
  }
  double coord(int axis, int idx) const {
    return -0.5 * box_side + idx * spacing() + origin_offset[axis];
  }
  Vec3 node(int i, int j, int k) const {
    return {coord(0, i), coord(1, j), coord(2, k)};
  }
  std::size_t index(int i, int j, int k) const {
    auto n = static_cast<std::size_t>(points_per_axis);
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }

  /// Half-cell shift in every axis; keeps |x|^-1 style samples off the origin.
  GridSpec half_cell_shifted() const {
    GridSpec g = *this;
    double s = 0.5 * spacing();
    g.origin_offset = {origin_offset[0] + s, origin_offset[1] + s,
                       origin_offset[2] + s};
    return g;
  }

  void validate() const;
  bool operator==(const GridSpec& o) const {
    return box_side == o.box_side && points_per_axis == o.points_per_axis &&
           origin_offset == o.origin_offset;
  }
};

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 1.0;
  int steps = 64;  // number of intervals; frames live on the steps+1 nodes

  int nodes() const { return steps + 1; }
  double dt() const { return (t1 - t0) / steps; }
  double node(int m) const { return t0 + m * dt(); }

  void validate() const;
  bool operator==(const TimeGrid& o) const {
    return t0 == o.t0 && t1 == o.t1 && steps == o.steps;
  }
};

/// Field with C components per grid node, stored component-major.
template <int C>
class Field {
 public:
  Field() = default;
  explicit Field(const GridSpec& g)
      : grid_(g), data_(g.point_count() * C, 0.0) {
    g.validate();
  }

  static constexpr int components = C;

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }

  double* component(int c) { return data_.data() + c * grid_.point_count(); }
  const double* component(int c) const {
    return data_.data() + c * grid_.point_count();
  }

  double& at(std::size_t p, int c = 0) {
    return data_[c * grid_.point_count() + p];
  }
  double at(std::size_t p, int c = 0) const {
    return data_[c * grid_.point_count() + p];
  }
  double& at(int i, int j, int k, int c = 0) {
    return at(grid_.index(i, j, k), c);
  }
  double at(int i, int j, int k, int c = 0) const {
    return at(grid_.index(i, j, k), c);
  }

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  Field& operator+=(const Field& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Field& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

 private:
  GridSpec grid_;
  std::vector<double> data_;
};

using ScalarField = Field<1>;
using VectorField = Field<3>;
using TensorField = Field<9>;  // row-major: component 3*i+j holds T_ij

template <int C>
struct SpaceTimeField {
  TimeGrid time;
  std::vector<Field<C>> frames;

  SpaceTimeField() = default;
  SpaceTimeField(const TimeGrid& tg, const GridSpec& g) : time(tg) {
    tg.validate();
    frames.assign(tg.nodes(), Field<C>(g));
  }

  const GridSpec& grid() const { return frames.at(0).grid(); }
  void validate() const;
};

using ScalarStack = SpaceTimeField<1>;
using VectorStack = SpaceTimeField<3>;
using TensorStack = SpaceTimeField<9>;

// ---- sampling ---------------------------------------------------------

/// Samples a closed-form function at grid nodes. Throws GridError naming the
/// offending node if a sample is not finite.
ScalarField sample_scalar(const GridSpec& g,
                          const std::function<double(Vec3)>& f);
VectorField sample_vector(const GridSpec& g,
                          const std::function<Vec3(Vec3)>& f);
TensorField sample_tensor(const GridSpec& g,
                          const std::function<Mat3(Vec3)>& f);

ScalarStack sample_scalar_time(const GridSpec& g, const TimeGrid& tg,
                               const std::function<double(Vec3, double)>& f);
VectorStack sample_vector_time(const GridSpec& g, const TimeGrid& tg,
                               const std::function<Vec3(Vec3, double)>& f);

// ---- integration and inner products ------------------------------------

double integrate(const ScalarField& f);
double integrate(const ScalarField& f, const ScalarField& weight);

template <int C>
double inner(const Field<C>& a, const Field<C>& b) {
  if (!(a.grid() == b.grid())) throw GridError("inner: grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.raw().size(); ++i) s += a.raw()[i] * b.raw()[i];
  return s * a.grid().cell_volume();
}

template <int C>
double l2_norm(const Field<C>& a) {
  return std::sqrt(inner(a, a));
}

template <int C>
double max_abs(const Field<C>& a) {
  double m = 0.0;
  for (double v : a.raw()) m = std::max(m, std::abs(v));
  return m;
}

/// Pointwise Euclidean magnitude of a multi-component field.
template <int C>
ScalarField magnitude(const Field<C>& f) {
  ScalarField out(f.grid());
  std::size_t n = f.grid().point_count();
  for (std::size_t p = 0; p < n; ++p) {
    double s = 0.0;
    for (int c = 0; c < C; ++c) s += f.at(p, c) * f.at(p, c);
    out.at(p) = std::sqrt(s);
  }
  return out;
}

// ---- masking ------------------------------------------------------------

/// 0/1 indicator of the ball; membership decided by cell-center location.
ScalarField ball_mask(const GridSpec& g, Vec3 center, double radius);

/// 0/1 everywhere (the whole box as a mask).
ScalarField box_mask(const GridSpec& g);

/// Checks that B(center, radius) lies inside the box (throws otherwise).
void require_ball_in_box(const GridSpec& g, Vec3 center, double radius);

/// True when every cell center lies inside the ball.
bool ball_covers_box(const GridSpec& g, Vec3 center, double radius);

template <int C>
Field<C> restrict_to_ball(const Field<C>& f, Vec3 center, double radius) {
  if (ball_covers_box(f.grid(), center, radius)) return f;
  require_ball_in_box(f.grid(), center, radius);
  Field<C> out(f.grid());
  const GridSpec& g = f.grid();
  int n = g.points_per_axis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if ((g.node(i, j, k) - center).norm() < radius) {
          std::size_t p = g.index(i, j, k);
          for (int c = 0; c < C; ++c) out.at(p, c) = f.at(p, c);
        }
      }
  return out;
}

// ---- rescaling (see spectral.cpp for the implementation) -----------------

enum class Interpolation { trigonometric, trilinear };

struct RescaledField {
  VectorField field;
  Interpolation method;
};

/// v(x) = R * u(x0 + R x) on the image grid (same N, box side L/R).
/// Requires B(x0, 2R) inside the source box. Periodic sources use
/// trigonometric interpolation (a Fourier phase shift); masked or otherwise
/// non-periodic data should request trilinear.
RescaledField rescale_field(const VectorField& u, Vec3 x0, double R,
                            Interpolation method = Interpolation::trigonometric);

}  // namespace nslab
