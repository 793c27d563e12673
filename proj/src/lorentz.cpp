#include "nslab/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nslab {

RearrangementProfile rearrange(const ScalarField& f, const ScalarField& mask) {
  if (!(f.grid() == mask.grid()))
    throw GridError("rearrange: field/mask grid mismatch");
  std::vector<std::size_t> idx;
  idx.reserve(f.raw().size());
  for (std::size_t p = 0; p < f.raw().size(); ++p)
    if (mask.at(p) != 0.0) idx.push_back(p);
  if (idx.empty()) throw GridError("rearrange: empty mask");

  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    double ma = std::abs(f.at(a)), mb = std::abs(f.at(b));
    if (ma != mb) return ma > mb;
    return a < b;  // stable total order on (magnitude, linear index)
  });

  RearrangementProfile prof;
  prof.cell_volume = f.grid().cell_volume();
  prof.magnitude.resize(idx.size());
  prof.volume.resize(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    prof.magnitude[k] = std::abs(f.at(idx[k]));
    prof.volume[k] = static_cast<double>(k + 1) * prof.cell_volume;
  }
  prof.total_volume = prof.volume.back();
  return prof;
}

LorentzNormResult lorentz_norm(const RearrangementProfile& prof, double q,
                               double r) {
  if (!(q > 1.0))
    throw GridError("lorentz_norm: q must be > 1 (q <= 1 rejected by policy)");
  if (!(r >= 1.0)) throw GridError("lorentz_norm: r must be >= 1");
  if (q == kInf && r != kInf)
    throw GridError("lorentz_norm: q = inf requires r = inf");

  LorentzNormResult res;
  res.q = q;
  res.r = r;

  const auto& mag = prof.magnitude;
  const auto& vol = prof.volume;
  std::size_t n = mag.size();

  if (q == kInf) {  // plain sup norm
    res.value = n ? mag[0] : 0.0;
    res.attaining_level = res.value;
    res.attaining_index = 0;
    return res;
  }

  if (r == kInf) {
    // sup_k f*_k V_k^{1/q}; on each plateau t^{1/q} f*(t) peaks at the
    // right endpoint, so scanning plateau ends is exact.
    double best = 0.0;
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < n; ++k) {
      bool plateau_end = (k + 1 == n) || (mag[k + 1] != mag[k]);
      if (!plateau_end) continue;
      double v = mag[k] * std::pow(vol[k], 1.0 / q);
      if (v > best) {
        best = v;
        best_k = k;
      }
    }
    res.value = best;
    res.attaining_index = best_k;
    res.attaining_level = n ? mag[best_k] : 0.0;
    return res;
  }

  // (r/q) * int [t^{1/q} f*]^r dt/t over the piecewise-constant profile:
  // each cell contributes f*_k^r (V_k^{r/q} - V_{k-1}^{r/q}).
  double rq = r / q;
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (mag[k] == 0.0) break;  // rearrangement is sorted; rest contribute 0
    double cur = std::pow(vol[k], rq);
    acc += std::pow(mag[k], r) * (cur - prev);
    prev = cur;
  }
  res.value = std::pow(acc, 1.0 / r);
  res.attaining_level = n ? mag[0] : 0.0;
  return res;
}

LorentzNormResult lorentz_norm(const ScalarField& f, const ScalarField& mask,
                               double q, double r) {
  return lorentz_norm(rearrange(f, mask), q, r);
}

template <int C>
MixedNormResult mixed_norm(const SpaceTimeField<C>& f, const ScalarField& mask,
                           double s, double q, double r) {
  if (!(s >= 1.0)) throw GridError("mixed_norm: s must be >= 1");
  f.validate();
  MixedNormResult res;
  res.s = s;
  res.q = q;
  res.r = r;
  res.frame_values.reserve(f.frames.size());
  for (const auto& frame : f.frames)
    res.frame_values.push_back(lorentz_norm(frame, mask, q, r).value);

  if (s == kInf) {
    res.value = *std::max_element(res.frame_values.begin(),
                                  res.frame_values.end());
    return res;
  }
  // Trapezoid on phi(t) = ||f(t)||^s: first/last frames half-weighted.
  double dt = f.time.dt();
  double acc = 0.0;
  for (std::size_t m = 0; m < res.frame_values.size(); ++m) {
    double w = (m == 0 || m + 1 == res.frame_values.size()) ? 0.5 : 1.0;
    acc += w * std::pow(res.frame_values[m], s);
  }
  res.value = std::pow(acc * dt, 1.0 / s);
  return res;
}

template MixedNormResult mixed_norm<1>(const SpaceTimeField<1>&,
                                       const ScalarField&, double, double,
                                       double);
template MixedNormResult mixed_norm<3>(const SpaceTimeField<3>&,
                                       const ScalarField&, double, double,
                                       double);
template MixedNormResult mixed_norm<9>(const SpaceTimeField<9>&,
                                       const ScalarField&, double, double,
                                       double);

double weak_norm_lambda_scan(const ScalarField& f, const ScalarField& mask,
                             double q) {
  RearrangementProfile prof = rearrange(f, mask);
  // Scan every distinct magnitude level (just below it, the superlevel set
  // includes the plateau) plus a dense filler grid between levels.
  double best = 0.0;
  std::size_t n = prof.magnitude.size();
  auto superlevel_volume = [&](double lambda) {
    // first index with magnitude <= lambda, via binary search on sorted desc
    std::size_t lo = 0, hi = n;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (prof.magnitude[mid] > lambda)
        lo = mid + 1;
      else
        hi = mid;
    }
    return static_cast<double>(lo) * prof.cell_volume;
  };
  std::vector<double> levels;
  for (std::size_t k = 0; k < n; ++k)
    if (prof.magnitude[k] > 0.0) levels.push_back(prof.magnitude[k]);
  std::size_t base = levels.size();
  for (std::size_t i = 0; i + 1 < base; ++i) {
    double a = levels[i + 1], b = levels[i];
    for (int j = 0; j < 4; ++j) levels.push_back(a + (b - a) * (j + 1) / 5.0);
  }
  for (double lvl : levels) {
    double lambda = lvl * (1.0 - 1e-12);
    double vol = superlevel_volume(lambda);
    best = std::max(best, lambda * std::pow(vol, 1.0 / q));
  }
  return best;
}

WeakScalingReport weak_scaling_check(
    const ScalarField& f, double lambda,
    const std::function<double(Vec3)>& closed_form) {
  const GridSpec& g = f.grid();
  GridSpec gs = g;
  gs.box_side = g.box_side / lambda;
  for (int a = 0; a < 3; ++a) gs.origin_offset[a] = g.origin_offset[a] / lambda;
  ScalarField scaled = sample_scalar(
      gs, [&](Vec3 x) { return lambda * closed_form(x * lambda); });
  WeakScalingReport rep;
  rep.norm_f = lorentz_norm(f, box_mask(g), 3.0, kInf).value;
  rep.norm_scaled = lorentz_norm(scaled, box_mask(gs), 3.0, kInf).value;
  rep.ratio = rep.norm_scaled / rep.norm_f;
  return rep;
}

}  // namespace nslab
