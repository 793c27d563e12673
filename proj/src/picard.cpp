#include "nslab/picard.hpp"

#include <cmath>

#include "nslab/flows.hpp"
#include "nslab/lorentz.hpp"

namespace nslab {

std::string to_string(PicardVerdict v) {
  switch (v) {
    case PicardVerdict::converged: return "converged";
    case PicardVerdict::diverged: return "diverged";
    case PicardVerdict::stalled: return "stalled";
  }
  return "?";
}

PicardProblem::PicardProblem(const VectorStack& u, const ScalarStack& p,
                             const SampledCutoffs& cut)
    : mask_(box_mask(u.grid())) {
  u.validate();
  const GridSpec& g = u.grid();
  a_ = VectorStack(u.time, g);
  for (int m = 0; m < u.time.nodes(); ++m)
    for (std::size_t q = 0; q < g.point_count(); ++q) {
      double pt = cut.phi_tilde.at(q);
      for (int c = 0; c < 3; ++c)
        a_.frames[m].at(q, c) = pt * u.frames[m].at(q, c);
    }

  // v0 from the localized forcing, streamed frame by frame.
  ScalarStack eta = eta_correction(u, cut);
  v0_ = build_v0_stream(
      g, u.time,
      [&](int m) {
        return f0_frame(u.frames[m], p.frames[m], u.time.node(m), cut);
      },
      [&](int m) {
        return f1_frame(u.frames[m], eta.frames[m], u.time.node(m), cut);
      });
}

VectorStack lambda_map(const VectorStack& v, const VectorStack& weighted_u,
                       const VectorStack& v0) {
  const GridSpec& g = v.grid();
  VectorStack out = duhamel_phi_stream(g, v.time, [&](int m) {
    TensorField F(g);
    for (std::size_t q = 0; q < g.point_count(); ++q)
      for (int i = 0; i < 3; ++i) {
        double ai = weighted_u.frames[m].at(q, i);
        if (ai == 0.0) continue;
        for (int j = 0; j < 3; ++j)
          F.at(q, 3 * i + j) = ai * v.frames[m].at(q, j);
      }
    return F;
  });
  for (int m = 0; m < v.time.nodes(); ++m) {
    for (std::size_t q = 0; q < g.point_count(); ++q)
      for (int c = 0; c < 3; ++c)
        out.frames[m].at(q, c) =
            v0.frames[m].at(q, c) - out.frames[m].at(q, c);
  }
  return out;
}

VectorStack PicardProblem::apply_lambda(const VectorStack& v) const {
  if (!(v.time == a_.time)) throw GridError("apply_lambda: time grid mismatch");
  if (!(v.grid() == a_.grid())) throw GridError("apply_lambda: grid mismatch");
  return lambda_map(v, a_, v0_);
}

double PicardProblem::metric_norm(const VectorStack& v, bool y_norm) const {
  double best = 0.0;
  for (const auto& f : v.frames) {
    double n3 = lorentz_norm(f, mask_, 3.0, kInf).value;
    if (y_norm) n3 += lorentz_norm(f, mask_, 3.5, kInf).value;
    best = std::max(best, n3);
  }
  return best;
}

double PicardProblem::metric_distance(const VectorStack& a,
                                      const VectorStack& b,
                                      bool y_norm) const {
  double best = 0.0;
  const GridSpec& g = a.grid();
  VectorField diff(g);
  for (std::size_t m = 0; m < a.frames.size(); ++m) {
    for (std::size_t q = 0; q < g.point_count(); ++q)
      for (int c = 0; c < 3; ++c)
        diff.at(q, c) = a.frames[m].at(q, c) - b.frames[m].at(q, c);
    double n3 = lorentz_norm(diff, mask_, 3.0, kInf).value;
    if (y_norm) n3 += lorentz_norm(diff, mask_, 3.5, kInf).value;
    best = std::max(best, n3);
  }
  return best;
}

namespace {

std::pair<VectorStack, PicardTrace> iterate_from(const PicardProblem& prob,
                                                 const PicardConfig& cfg,
                                                 VectorStack v) {
  PicardTrace trace;
  double prev_inc = -1.0;
  for (int n = 0; n < cfg.max_iters; ++n) {
    VectorStack next = prob.apply_lambda(v);
    double norm = prob.metric_norm(next, cfg.use_y_norm);
    double inc = prob.metric_distance(next, v, cfg.use_y_norm);
    trace.norms.push_back(norm);
    trace.increments.push_back(inc);
    if (prev_inc > 0.0) trace.ratios.push_back(inc / prev_inc);
    prev_inc = inc;
    v = std::move(next);
    trace.iterations = n + 1;
    if (!std::isfinite(norm) || norm > cfg.divergence_cap) {
      trace.verdict = PicardVerdict::diverged;
      return {std::move(v), trace};
    }
    if (inc <= cfg.rel_tolerance * std::max(norm, 1e-300)) {
      trace.verdict = PicardVerdict::converged;
      VectorStack again = prob.apply_lambda(v);
      trace.residual =
          prob.metric_distance(again, v, cfg.use_y_norm) / std::max(norm, 1e-300);
      return {std::move(v), trace};
    }
  }
  trace.verdict = PicardVerdict::stalled;
  return {std::move(v), trace};
}

}  // namespace

std::pair<VectorStack, PicardTrace> solve_fixed_point(
    const PicardProblem& prob, const PicardConfig& cfg) {
  VectorStack v(prob.time(), prob.grid());  // v_0 = 0
  return iterate_from(prob, cfg, std::move(v));
}

UniquenessReport uniqueness_probe(const PicardProblem& prob,
                                  const PicardConfig& cfg,
                                  const std::vector<PicardStart>& starts) {
  UniquenessReport rep;
  std::vector<VectorStack> limits;
  double base_norm = 0.0;
  for (PicardStart s : starts) {
    VectorStack v(prob.time(), prob.grid());
    if (s == PicardStart::v0) {
      v = prob.v0();
    } else if (s == PicardStart::random) {
      VectorField r = random_solenoidal(prob.grid(), 12345u, SpectrumSpec{1, 3, 0.05});
      for (int m = 1; m < prob.time().nodes(); ++m)
        v.frames[m] = r;  // keep the zero initial frame
    }
    auto [limit, trace] = iterate_from(prob, cfg, std::move(v));
    rep.verdicts.push_back(trace.verdict);
    limits.push_back(std::move(limit));
    base_norm = std::max(base_norm, prob.metric_norm(limits.back(), false));
  }
  rep.all_converged = true;
  for (auto v : rep.verdicts)
    if (v != PicardVerdict::converged) rep.all_converged = false;
  for (std::size_t i = 0; i < limits.size(); ++i)
    for (std::size_t j = i + 1; j < limits.size(); ++j) {
      double d = prob.metric_distance(limits[i], limits[j], false);
      rep.pairwise_distances.push_back(d);
      rep.max_distance =
          std::max(rep.max_distance, d / std::max(base_norm, 1e-300));
    }
  return rep;
}

namespace {

double probe_ratio(const PicardProblem& prob, int iters) {
  PicardConfig cfg;
  cfg.max_iters = iters;
  cfg.rel_tolerance = 0.0;  // run all probe iterations
  cfg.divergence_cap = 1e30;
  auto [v, trace] = solve_fixed_point(prob, cfg);
  double r = 0.0;
  // tail ratios (skip the first, which mixes in the affine offset)
  std::size_t from = trace.ratios.size() > 3 ? trace.ratios.size() - 3 : 1;
  for (std::size_t i = from; i < trace.ratios.size(); ++i)
    r = std::max(r, trace.ratios[i]);
  return r;
}

}  // namespace

ThresholdScanReport contraction_threshold_scan(
    const std::function<std::pair<VectorStack, ScalarStack>(double)>& flow_at,
    const SampledCutoffs& cut, const std::vector<double>& amplitudes,
    int probe_iters, int bisect_steps) {
  ThresholdScanReport rep;
  ScalarField mask2;
  bool have_mask = false;
  auto measure = [&](double amp) {
    auto [u, p] = flow_at(amp);
    if (!have_mask) {
      mask2 = ball_mask(u.grid(), {0, 0, 0}, 2.0);
      have_mask = true;
    }
    PicardProblem prob(u, p, cut);
    ThresholdScanPoint pt;
    pt.amplitude = amp;
    pt.ratio = probe_ratio(prob, probe_iters);
    double wn = 0.0;
    for (const auto& f : u.frames)
      wn = std::max(wn, lorentz_norm(f, mask2, 3.0, kInf).value);
    pt.weak_norm = wn;
    return pt;
  };

  for (double a : amplitudes) rep.points.push_back(measure(a));
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.points.size(); ++i)
    if (rep.points[i].ratio < rep.points[i - 1].ratio * (1.0 - 1e-9))
      rep.monotone = false;

  // bracket the crossing of ratio = 1
  double lo = -1.0, hi = -1.0;
  for (std::size_t i = 0; i + 1 < rep.points.size(); ++i)
    if (rep.points[i].ratio < 1.0 && rep.points[i + 1].ratio >= 1.0) {
      lo = rep.points[i].amplitude;
      hi = rep.points[i + 1].amplitude;
      break;
    }
  if (lo < 0.0) {
    // no crossing inside the grid: extrapolate from the largest point
    // (the contraction factor of the affine map scales linearly with the
    // amplitude, so this is a mild extrapolation)
    const auto& last = rep.points.back();
    rep.amplitude_star = last.amplitude / std::max(last.ratio, 1e-300);
    rep.eps_star = last.weak_norm / std::max(last.ratio, 1e-300);
    return rep;
  }
  ThresholdScanPoint at_star;
  for (int b = 0; b < bisect_steps; ++b) {
    double mid = std::sqrt(lo * hi);
    at_star = measure(mid);
    (at_star.ratio < 1.0 ? lo : hi) = mid;
  }
  rep.amplitude_star = std::sqrt(lo * hi);
  at_star = measure(rep.amplitude_star);
  rep.eps_star = at_star.weak_norm;
  return rep;
}

}  // namespace nslab
