#include "nslab/grid.hpp"

#include <cmath>
#include <sstream>

namespace nslab {

void GridSpec::validate() const {
  if (points_per_axis < 8 || points_per_axis % 2 != 0)
    throw GridError("GridSpec: points_per_axis must be even and >= 8, got " +
                    std::to_string(points_per_axis));
  if (!(box_side > 0.0)) throw GridError("GridSpec: box_side must be > 0");
}

void TimeGrid::validate() const {
  if (!(0.0 <= t0 && t0 < t1 && t1 <= 1.0))
    throw GridError("TimeGrid: need 0 <= t0 < t1 <= 1");
  if (steps < 2) throw GridError("TimeGrid: need at least 2 steps");
}

template <int C>
void SpaceTimeField<C>::validate() const {
  time.validate();
  if (static_cast<int>(frames.size()) != time.nodes())
    throw GridError("SpaceTimeField: frame count does not match time grid");
  for (const auto& f : frames)
    if (!(f.grid() == frames[0].grid()))
      throw GridError("SpaceTimeField: frames live on different grids");
}

template void SpaceTimeField<1>::validate() const;
template void SpaceTimeField<3>::validate() const;
template void SpaceTimeField<9>::validate() const;

namespace {

[[noreturn]] void bad_sample(const Vec3& x, double t, bool has_time) {
  std::ostringstream os;
  os << "sample: non-finite value at node (" << x.x << ", " << x.y << ", "
     << x.z << ")";
  if (has_time) os << " t=" << t;
  throw GridError(os.str());
}

}  // namespace

ScalarField sample_scalar(const GridSpec& g,
                          const std::function<double(Vec3)>& f) {
  ScalarField out(g);
  int n = g.points_per_axis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vec3 x = g.node(i, j, k);
        double v = f(x);
        if (!std::isfinite(v)) bad_sample(x, 0.0, false);
        out.at(i, j, k) = v;
      }
  return out;
}

VectorField sample_vector(const GridSpec& g,
                          const std::function<Vec3(Vec3)>& f) {
  VectorField out(g);
  int n = g.points_per_axis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vec3 x = g.node(i, j, k);
        Vec3 v = f(x);
        for (int c = 0; c < 3; ++c) {
          if (!std::isfinite(v[c])) bad_sample(x, 0.0, false);
          out.at(i, j, k, c) = v[c];
        }
      }
  return out;
}

TensorField sample_tensor(const GridSpec& g,
                          const std::function<Mat3(Vec3)>& f) {
  TensorField out(g);
  int n = g.points_per_axis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vec3 x = g.node(i, j, k);
        Mat3 v = f(x);
        for (int c = 0; c < 9; ++c) {
          if (!std::isfinite(v.data[c])) bad_sample(x, 0.0, false);
          out.at(i, j, k, c) = v.data[c];
        }
      }
  return out;
}

ScalarStack sample_scalar_time(const GridSpec& g, const TimeGrid& tg,
                               const std::function<double(Vec3, double)>& f) {
  ScalarStack out(tg, g);
  int n = g.points_per_axis;
  for (int m = 0; m < tg.nodes(); ++m) {
    double t = tg.node(m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Vec3 x = g.node(i, j, k);
          double v = f(x, t);
          if (!std::isfinite(v)) bad_sample(x, t, true);
          out.frames[m].at(i, j, k) = v;
        }
  }
  return out;
}

VectorStack sample_vector_time(const GridSpec& g, const TimeGrid& tg,
                               const std::function<Vec3(Vec3, double)>& f) {
  VectorStack out(tg, g);
  int n = g.points_per_axis;
  for (int m = 0; m < tg.nodes(); ++m) {
    double t = tg.node(m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Vec3 x = g.node(i, j, k);
          Vec3 v = f(x, t);
          for (int c = 0; c < 3; ++c) {
            if (!std::isfinite(v[c])) bad_sample(x, t, true);
            out.frames[m].at(i, j, k, c) = v[c];
          }
        }
  }
  return out;
}

double integrate(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.raw()) s += v;
  return s * f.grid().cell_volume();
}

double integrate(const ScalarField& f, const ScalarField& weight) {
  if (!(f.grid() == weight.grid()))
    throw GridError("integrate: grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.raw().size(); ++i)
    s += f.raw()[i] * weight.raw()[i];
  return s * f.grid().cell_volume();
}

void require_ball_in_box(const GridSpec& g, Vec3 center, double radius) {
  if (radius < 0.0) throw GridError("ball radius must be >= 0");
  for (int a = 0; a < 3; ++a) {
    double lo = -0.5 * g.box_side + g.origin_offset[a];
    double hi = lo + g.box_side;
    if (center[a] - radius < lo - 1e-12 || center[a] + radius > hi + 1e-12)
      throw GridError("ball exceeds box along axis " + std::to_string(a));
  }
}

bool ball_covers_box(const GridSpec& g, Vec3 center, double radius) {
  int n = g.points_per_axis;
  // Farthest cell center from `center` is at one of the grid corners.
  double worst = 0.0;
  for (int a = 0; a < 3; ++a) {
    double lo = g.coord(a, 0) - center[a];
    double hi = g.coord(a, n - 1) - center[a];
    double m = std::max(std::abs(lo), std::abs(hi));
    worst += m * m;
  }
  return std::sqrt(worst) <= radius;
}

ScalarField ball_mask(const GridSpec& g, Vec3 center, double radius) {
  if (!ball_covers_box(g, center, radius))
    require_ball_in_box(g, center, radius);
  ScalarField out(g);
  int n = g.points_per_axis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if ((g.node(i, j, k) - center).norm() < radius) out.at(i, j, k) = 1.0;
  return out;
}

ScalarField box_mask(const GridSpec& g) {
  ScalarField out(g);
  for (double& v : out.raw()) v = 1.0;
  return out;
}

}  // namespace nslab
