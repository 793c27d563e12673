/// @file nslab.cpp
/// @brief Command-line front end: norms, localize, picard run/scan, ledger
///        verbs, kernel checks, flow sampling, residual checks.
///
/// Exit codes: 0 pass/converged, 1 internal error, 2 config/validation
/// error, 3 numerical divergence/stall verdict.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "nslab/flows.hpp"
#include "nslab/io.hpp"
#include "nslab/kernels.hpp"
#include "nslab/ledger.hpp"
#include "nslab/localization.hpp"
#include "nslab/lorentz.hpp"
#include "nslab/picard.hpp"
#include "nslab/residuals.hpp"
#include "nslab/stokes.hpp"

namespace {

using namespace nslab;

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  int grid_n = 0;      // override when > 0
  int time_steps = 0;  // override when > 0
  std::uint64_t seed = 0;
};

ExperimentConfig resolve_config(const CliOptions& opt) {
  ExperimentConfig cfg;
  if (!opt.config_path.empty()) cfg = load_config_file(opt.config_path);
  if (opt.grid_n > 0) cfg.grid_n = opt.grid_n;
  if (opt.time_steps > 0) cfg.time_steps = opt.time_steps;
  if (opt.seed > 0) cfg.seed = opt.seed;
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (cfg.out_dir.empty()) {
    const char* env = std::getenv("NSLAB_OUT");
    cfg.out_dir = env ? env : "nslab_out";
  }
  cfg.grid().validate();
  cfg.time().validate();
  return cfg;
}

struct FlowData {
  VectorStack u;
  ScalarStack p;
};

FlowData make_flow(const ExperimentConfig& cfg) {
  GridSpec g = cfg.grid();
  TimeGrid tg = cfg.time();
  if (cfg.flow == "serrin") {
    Poly3 h = Poly3::var(0) * Poly3::var(1);
    TestFlow fl = serrin_flow(TimePoly{0.0, cfg.amplitude}, h);
    return {fl.sample(g, tg), fl.sample_pressure(g, tg)};
  }
  if (cfg.flow == "landau") {
    TestFlow fl = landau_flow(cfg.landau_a);
    FlowData fd{fl.sample(g, tg), fl.sample_pressure(g, tg)};
    for (auto& fr : fd.u.frames) fr *= cfg.amplitude;
    for (auto& fr : fd.p.frames) fr *= cfg.amplitude;
    return fd;
  }
  VectorField r = random_solenoidal(g, cfg.seed, SpectrumSpec{1, 3, cfg.amplitude});
  FlowData fd{VectorStack(tg, g), ScalarStack(tg, g)};
  for (auto& fr : fd.u.frames) fr = r;
  ScalarField pr = pressure_from_velocity(r);
  for (auto& fr : fd.p.frames) fr = pr;
  return fd;
}

RunReport start_report(const ExperimentConfig& cfg) {
  RunReport rep;
  rep.config_hash = config_hash(cfg);
  rep.version = tool_version();
  return rep;
}

void persist_report(const ExperimentConfig& cfg, const RunReport& rep,
                    const std::string& name) {
  atomic_write(cfg.out_dir + "/" + name + ".json", rep.to_json().dump(2) + "\n");
}

int cmd_norms(const CliOptions& opt) {
  ExperimentConfig cfg = resolve_config(opt);
  FlowData fd = make_flow(cfg);
  ScalarField mask2 = ball_mask(fd.u.grid(), {0, 0, 0}, 2.0);
  MixedNormResult eps = mixed_norm(fd.u, mask2, kInf, 3.0, kInf);
  // || p ||_{L^m L^1} with m = 3 (any m > 2 qualifies for the hypothesis)
  double m_exp = 3.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < fd.p.frames.size(); ++i) {
    double l1 = integrate(magnitude(fd.p.frames[i]), mask2);
    double w = (i == 0 || i + 1 == fd.p.frames.size()) ? 0.5 : 1.0;
    acc += w * std::pow(l1, m_exp);
  }
  double pnorm = std::pow(acc * fd.p.time.dt(), 1.0 / m_exp);
  RunReport rep = start_report(cfg);
  rep.tasks.push_back(Json{{"name", "norms"},
                           {"epsilon", eps.value},
                           {"pressure_LmL1", pnorm},
                           {"C_star", eps.value + pnorm},
                           {"verdict", "pass"}});
  persist_report(cfg, rep, "norms");
  std::cout << "epsilon = " << eps.value << "\nC_star  = "
            << eps.value + pnorm << "\n";
  return 0;
}

int cmd_localize(const CliOptions& opt) {
  ExperimentConfig cfg = resolve_config(opt);
  FlowData fd = make_flow(cfg);
  SampledCutoffs cut(fd.u.grid());
  LocalizedState st = localize(fd.u, fd.p, cut);
  SupportAuditReport audit = forcing_support_audit(st);
  std::string base = cfg.out_dir + "/localized";
  write_snapshot(base + "_utilde", st.utilde, "utilde");
  write_snapshot(base + "_eta", st.eta, "eta");
  write_snapshot(base + "_ptilde", st.ptilde, "ptilde");
  write_snapshot(base + "_f0", st.f0, "f0");
  write_snapshot(base + "_f1", st.f1, "f1");
  write_localized_manifest(base + "_manifest.json",
                           {"utilde", "eta", "ptilde", "f0", "f1"});
  RunReport rep = start_report(cfg);
  rep.tasks.push_back(Json{{"name", "localize"},
                           {"max_f0_outside", audit.max_f0_outside},
                           {"max_f1_outside", audit.max_f1_outside},
                           {"f0_mixed_norm", audit.f0_l1_linf_m_norm},
                           {"verdict", audit.pass ? "pass" : "fail"}});
  persist_report(cfg, rep, "localize");
  std::cout << "support audit: " << (audit.pass ? "pass" : "fail") << "\n";
  return audit.pass ? 0 : 3;
}

int cmd_picard_run(const CliOptions& opt) {
  ExperimentConfig cfg = resolve_config(opt);
  FlowData fd = make_flow(cfg);
  SampledCutoffs cut(fd.u.grid());
  PicardProblem prob(fd.u, fd.p, cut);
  PicardConfig pc;
  pc.max_iters = cfg.max_iters;
  pc.rel_tolerance = cfg.rel_tolerance;
  pc.divergence_cap = cfg.divergence_cap;
  pc.use_y_norm = cfg.y_norm;
  auto [v, trace] = solve_fixed_point(prob, pc);
  atomic_write(cfg.out_dir + "/picard_trace.csv", picard_trace_csv(trace));
  RunReport rep = start_report(cfg);
  Json v_json = picard_verdict_json(trace);
  rep.tasks.push_back(Json{{"name", "picard_run"}, {"result", v_json}});
  persist_report(cfg, rep, "picard");
  std::cout << "picard: " << to_string(trace.verdict) << " in "
            << trace.iterations << " iterations\n";
  return trace.verdict == PicardVerdict::converged ? 0 : 3;
}

int cmd_picard_scan(const CliOptions& opt) {
  ExperimentConfig cfg = resolve_config(opt);
  GridSpec g = cfg.grid();
  TimeGrid tg = cfg.time();
  std::vector<double> amps = cfg.scan_amplitudes;
  if (amps.empty()) amps = {0.02, 0.06, 0.18, 0.54, 1.6, 4.8};
  SampledCutoffs cut(g);
  Poly3 h = Poly3::var(0) * Poly3::var(1);
  auto flow_at = [&](double amp) {
    TestFlow fl = serrin_flow(TimePoly{0.0, amp}, h);
    return std::make_pair(fl.sample(g, tg), fl.sample_pressure(g, tg));
  };
  ThresholdScanReport scan =
      contraction_threshold_scan(flow_at, cut, amps, 8, 6);
  Json pts = Json::array();
  for (const auto& p : scan.points)
    pts.push_back(Json{{"amplitude", p.amplitude},
                       {"ratio", p.ratio},
                       {"weak_norm", p.weak_norm}});
  RunReport rep = start_report(cfg);
  rep.tasks.push_back(Json{{"name", "picard_scan"},
                           {"points", pts},
                           {"monotone", scan.monotone},
                           {"amplitude_star", scan.amplitude_star},
                           {"eps_star", scan.eps_star}});
  persist_report(cfg, rep, "picard_scan");
  std::cout << "eps* = " << scan.eps_star << " (amplitude "
            << scan.amplitude_star << ")\n";
  return 0;
}

int cmd_kernel_check(const CliOptions& opt, int n_samples) {
  ExperimentConfig cfg = resolve_config(opt);
  // closed form vs quadrature oracle
  std::vector<KernelSample> samples;
  double worst = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    double r = 0.3 * std::pow(10.0, 1.2 * s / n_samples);
    double t = 0.05 * std::pow(10.0, 1.0 * ((s * 7) % n_samples) / n_samples);
    Vec3 x{r * 0.8, r * 0.36, -r * 0.48};
    Mat3 closed = oseen_tensor(x, t);
    Mat3 oracle = oseen_tensor_oracle(x, t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        samples.push_back({x, t, i, j, closed(i, j), KernelMethod::closed_form});
        samples.push_back(
            {x, t, i, j, oracle(i, j), KernelMethod::quadrature_oracle});
      }
    worst = std::max(worst, (closed - oracle).max_abs() / closed.max_abs());
  }
  atomic_write(cfg.out_dir + "/kernel_samples.csv", kernel_samples_csv(samples));
  Json scans = Json::array();
  bool stable = true;
  for (int l = 0; l <= 1; ++l)
    for (int k = 0; k <= 1; ++k) {
      DecayScanReport d = decay_scan(l, k, DecaySampleSpec{});
      scans.push_back(decay_scan_json(d));
      stable = stable && d.stable;
    }
  bool pass = worst <= 1e-6 && stable;
  RunReport rep = start_report(cfg);
  rep.tasks.push_back(Json{{"name", "kernel_check"},
                           {"oracle_worst_rel", worst},
                           {"decay_scans", scans},
                           {"verdict", pass ? "pass" : "fail"}});
  persist_report(cfg, rep, "kernel_check");
  std::cout << "kernel check: " << (pass ? "pass" : "fail")
            << " (worst oracle mismatch " << worst << ")\n";
  return pass ? 0 : 3;
}

int cmd_flows_sample(const CliOptions& opt) {
  ExperimentConfig cfg = resolve_config(opt);
  FlowData fd = make_flow(cfg);
  write_snapshot(cfg.out_dir + "/flow_u", fd.u, cfg.flow + "_u");
  write_snapshot(cfg.out_dir + "/flow_p", fd.p, cfg.flow + "_p");
  std::cout << "wrote " << cfg.out_dir << "/flow_u.{json,f64}\n";
  return 0;
}

int cmd_residual_check(const CliOptions& opt) {
  ExperimentConfig cfg = resolve_config(opt);
  Poly3 h = Poly3::var(0) * Poly3::var(1);
  TestFlow fl = serrin_flow(TimePoly{0.0, cfg.amplitude}, h);
  ResidualReport weak = weak_residual(fl, make_weak_battery(), 1e-6);
  ResidualReport vweak =
      very_weak_residual(fl, make_solenoidal_battery(), 1e-6);
  RunReport rep = start_report(cfg);
  rep.tasks.push_back(residual_report_json(weak));
  rep.tasks.push_back(residual_report_json(vweak));
  persist_report(cfg, rep, "residual_check");
  bool pass = weak.pass && vweak.pass;
  std::cout << "residual check: " << (pass ? "pass" : "fail") << "\n";
  return pass ? 0 : 3;
}

ExtRational parse_rat(const std::string& s) { return ExtRational::parse(s); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for critical-norm Navier-Stokes "
               "regularity ingredients"};
  app.require_subcommand(1);

  CliOptions opt;
  app.add_option("--config", opt.config_path, "config file (TOML or JSON)");
  app.add_option("--out", opt.out_dir, "output directory (or $NSLAB_OUT)");
  app.add_option("--grid-n", opt.grid_n, "override grid points per axis");
  app.add_option("--time-steps", opt.time_steps, "override time steps");
  app.add_option("--seed", opt.seed, "override RNG seed");

  auto* norms = app.add_subcommand("norms", "hypothesis norms of a flow");
  auto* localize_cmd = app.add_subcommand("localize", "cut-off pipeline");
  auto* picard = app.add_subcommand("picard", "fixed-point solver");
  auto* picard_run = picard->add_subcommand("run", "iterate to a fixed point");
  auto* picard_scan = picard->add_subcommand("scan", "amplitude threshold scan");
  picard->require_subcommand(1);

  auto* ledger = app.add_subcommand("ledger", "exact exponent bookkeeping");
  ledger->require_subcommand(1);
  std::string q_s = "9", s_s = "9", m_s = "3", delta_s = "0";
  auto* boot = ledger->add_subcommand("bootstrap", "vorticity exponent chain");
  boot->add_option("--q", q_s, "q exponent (rational or inf)");
  boot->add_option("--s", s_s, "s exponent");
  auto* mcond = ledger->add_subcommand("mcond", "pressure m-threshold");
  mcond->add_option("--q", q_s, "q exponent");
  mcond->add_option("--m", m_s, "m exponent");
  auto* step1 = ledger->add_subcommand("step1", "source-term exponent system");
  step1->add_option("--q", q_s, "q exponent");
  step1->add_option("--s", s_s, "s exponent (must satisfy 3/q + 2/s = 1)");
  step1->add_option("--m", m_s, "m exponent");
  step1->add_option("--delta", delta_s, "delta >= 0");
  auto* classify = ledger->add_subcommand("classify", "Serrin class of (q, s)");
  classify->add_option("--q", q_s, "q exponent");
  classify->add_option("--s", s_s, "s exponent");

  auto* kernel = app.add_subcommand("kernel", "kernel evaluations");
  auto* kernel_check = kernel->add_subcommand("check", "cross-check suite");
  int kernel_samples = 20;
  kernel_check->add_option("--samples", kernel_samples, "number of points");
  kernel->require_subcommand(1);

  auto* flows_cmd = app.add_subcommand("flows", "test flows");
  auto* flows_sample = flows_cmd->add_subcommand("sample", "sample to snapshot");
  flows_cmd->require_subcommand(1);

  auto* residual = app.add_subcommand("residual", "weak-form residuals");
  auto* residual_check = residual->add_subcommand("check", "run batteries");
  residual->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*norms) return cmd_norms(opt);
    if (*localize_cmd) return cmd_localize(opt);
    if (*picard_run) return cmd_picard_run(opt);
    if (*picard_scan) return cmd_picard_scan(opt);
    if (*boot) {
      BootstrapSchedule sch = bootstrap_schedule(parse_rat(q_s), parse_rat(s_s));
      std::cout << "K = " << sch.K << ", sigma = " << sch.sigma.to_string()
                << "\n k   p_k        a_k        b_k\n";
      for (std::size_t k = 0; k < sch.p.size(); ++k)
        std::cout << " " << k << "   " << sch.p[k].to_string() << "   "
                  << sch.a[k].to_string() << "   " << sch.b[k].to_string()
                  << "\n";
      ExperimentConfig cfg = resolve_config(opt);
      atomic_write(cfg.out_dir + "/ledger_bootstrap.json",
                   bootstrap_json(sch).dump(2) + "\n");
      return 0;
    }
    if (*mcond) {
      PressureMReport r = pressure_m_condition(parse_rat(q_s), parse_rat(m_s));
      std::cout << "threshold 2q/(3(q-2)) = " << r.threshold.to_string()
                << ", m > threshold: " << (r.holds ? "yes" : "no")
                << ", implied by m >= 1: "
                << (r.implied_by_m_ge_1 ? "yes" : "no") << "\n";
      ExperimentConfig cfg = resolve_config(opt);
      atomic_write(cfg.out_dir + "/ledger_mcond.json",
                   pressure_m_json(r).dump(2) + "\n");
      return 0;
    }
    if (*step1) {
      Step1Ledger led = appendix_step1_conditions(
          parse_rat(q_s), parse_rat(s_s), parse_rat(m_s), parse_rat(delta_s));
      std::cout << "a = " << led.a.to_string() << ", b = " << led.b.to_string()
                << ", rho = " << led.rho.to_string()
                << "\nb window [1, 3/2): " << (led.b_window ? "yes" : "no")
                << "\nweighted-time condition: " << (led.a15 ? "yes" : "no")
                << " (equivalent form agrees: "
                << (led.forms_agree ? "yes" : "no") << ")\n";
      ExperimentConfig cfg = resolve_config(opt);
      atomic_write(cfg.out_dir + "/ledger_step1.json",
                   step1_json(led).dump(2) + "\n");
      return 0;
    }
    if (*classify) {
      SerrinReport r = serrin_classify(parse_rat(q_s), parse_rat(s_s));
      std::cout << "3/q + 2/s = " << r.value.to_string() << " -> "
                << to_string(r.cls) << "\n";
      ExperimentConfig cfg = resolve_config(opt);
      atomic_write(cfg.out_dir + "/ledger_classify.json",
                   serrin_json(r).dump(2) + "\n");
      return 0;
    }
    if (*kernel_check) return cmd_kernel_check(opt, kernel_samples);
    if (*flows_sample) return cmd_flows_sample(opt);
    if (*residual_check) return cmd_residual_check(opt);
  } catch (const IoError& e) {
    std::cerr << "config/io error: " << e.what() << "\n";
    return 2;
  } catch (const RationalError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const LedgerError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
