#include "nslab/ledger.hpp"

namespace nslab {

namespace {

const ExtRational kOne = rat(1);
const ExtRational kZero = rat(0);

void require_range(const ExtRational& v, const ExtRational& lo, bool lo_strict,
                   const std::string& name) {
  int c = ExtRational::compare(v, lo);
  if (lo_strict ? c <= 0 : c < 0)
    throw LedgerError(name + " out of range (got " + v.to_string() + ")");
}

}  // namespace

std::string to_string(SerrinClass c) {
  switch (c) {
    case SerrinClass::subcritical: return "subcritical";
    case SerrinClass::critical: return "critical";
    case SerrinClass::supercritical: return "supercritical";
  }
  return "?";
}

SerrinReport serrin_classify(const ExtRational& q, const ExtRational& s) {
  require_range(q, kOne, true, "q");
  require_range(s, kOne, false, "s");
  SerrinReport rep;
  rep.q = q;
  rep.s = s;
  rep.value = rat(3) * q.reciprocal() + rat(2) * s.reciprocal();
  int c = ExtRational::compare(rep.value, kOne);
  rep.cls = c < 0 ? SerrinClass::subcritical
                  : (c == 0 ? SerrinClass::critical
                            : SerrinClass::supercritical);
  return rep;
}

BootstrapSchedule bootstrap_schedule(const ExtRational& q,
                                     const ExtRational& s) {
  require_range(q, rat(3), true, "q");
  require_range(s, rat(3), false, "s");
  BootstrapSchedule sch;
  sch.q = q;
  sch.s = s;
  sch.margin = kOne - rat(3) * q.reciprocal() - rat(2) * s.reciprocal();
  if (sch.margin <= kZero)
    throw LedgerError("bootstrap_schedule: subcriticality 3/q + 2/s < 1 "
                      "violated (margin " + sch.margin.to_string() + ")");

  // Least integer K with 2/(3K) < margin/5, i.e. K > 10/(3*margin).
  ExtRational bound = rat(10) / (rat(3) * sch.margin);
  sch.K = (bound.floor() + BigInt(1)).to_int64();
  sch.sigma = rat(2) / rat(3 * sch.K);

  // Minimality: K-1 must violate (or be zero).
  if (sch.K == 1) {
    sch.k_minimal = true;
  } else {
    ExtRational sigma_prev = rat(2) / rat(3 * (sch.K - 1));
    sch.k_minimal = sigma_prev >= sch.margin / rat(5);
  }

  ExtRational p0_inv = rat(2, 3);
  sch.all_a_ge_1 = true;
  sch.all_b_ge_1 = true;
  for (long long k = 0; k <= sch.K; ++k) {
    ExtRational pk_inv = p0_inv - rat(k) * sch.sigma;
    ExtRational pk = pk_inv.reciprocal();
    sch.p.push_back(pk);
    ExtRational ak = (pk_inv + s.reciprocal()).reciprocal();
    ExtRational bk = (pk_inv + q.reciprocal()).reciprocal();
    sch.a.push_back(ak);
    sch.b.push_back(bk);
    if (ak < kOne) sch.all_a_ge_1 = false;
    if (bk < kOne) sch.all_b_ge_1 = false;
  }
  sch.terminal_infinite = sch.p.back().is_infinite();
  return sch;
}

PressureMReport pressure_m_condition(const ExtRational& q,
                                     const ExtRational& m) {
  require_range(q, rat(2), true, "q");
  PressureMReport rep;
  rep.q = q;
  rep.m = m;
  if (q.is_infinite()) {
    // 2q/(3(q-2)) -> 2/3 as q -> inf.
    rep.threshold = rat(2, 3);
  } else {
    rep.threshold = rat(2) * q / (rat(3) * (q - rat(2)));
  }
  rep.holds = m > rep.threshold;
  rep.implied_by_m_ge_1 = rep.threshold < kOne;
  return rep;
}

Step1Ledger appendix_step1_conditions(const ExtRational& q,
                                      const ExtRational& s,
                                      const ExtRational& m,
                                      const ExtRational& delta) {
  require_range(q, rat(3), true, "q");
  require_range(delta, kZero, false, "delta");
  require_range(m, kOne, false, "m");
  ExtRational crit = rat(3) * q.reciprocal() + rat(2) * s.reciprocal();
  if (crit != kOne)
    throw LedgerError("appendix_step1_conditions: criticality 3/q + 2/s = 1 "
                      "required (got " + crit.to_string() + ")");

  Step1Ledger led;
  led.q = q;
  led.s = s;
  led.m = m;
  led.delta = delta;
  led.r = q;

  ExtRational qd_inv = (q + delta).reciprocal();
  // 1/a = 1/(q+delta) - 2/q + 1
  ExtRational a_inv = qd_inv - rat(2) * q.reciprocal() + kOne;
  if (a_inv <= kZero)
    throw LedgerError("appendix_step1_conditions: inconsistent exponent "
                      "system (1/a <= 0)");
  led.a = a_inv.reciprocal();
  // 1/b = 1/(q+delta) - 1/r + 1, with r = q
  ExtRational b_inv = qd_inv - q.reciprocal() + kOne;
  if (b_inv <= kZero)
    throw LedgerError("appendix_step1_conditions: inconsistent exponent "
                      "system (1/b <= 0)");
  led.b = b_inv.reciprocal();
  // 1/rho = 1/s - 1/m + 1
  ExtRational rho_inv = s.reciprocal() - m.reciprocal() + kOne;
  if (rho_inv <= kZero)
    throw LedgerError("appendix_step1_conditions: inconsistent exponent "
                      "system (1/rho <= 0)");
  led.rho = rho_inv.reciprocal();

  led.b_window = (led.b >= kOne) && (led.b < rat(3, 2));
  // (3/2 - 3/(2a)) * rho < 1
  ExtRational weight = rat(3, 2) - rat(3, 2) * a_inv;
  led.a15 = weight * led.rho < kOne;
  // 1/m < 3/s + 3/(2(q+delta))
  led.equivalent_form =
      m.reciprocal() < rat(3) * s.reciprocal() + rat(3, 2) * qd_inv;
  led.forms_agree = led.a15 == led.equivalent_form;
  return led;
}

DeltaWindow lemma31_delta_window(const ExtRational& m) {
  if (!(m > rat(2)))
    throw LedgerError("lemma31_delta_window: m > 2 required (got " +
                      m.to_string() + ")");
  DeltaWindow w;
  w.lo = kZero;
  if (m.is_infinite())
    w.hi = ExtRational::infinity();
  else
    w.hi = rat(3, 2) * (m - rat(2));
  return w;
}

YoungCheck young_convolution_check(const ExtRational& a, const ExtRational& b,
                                   const ExtRational& c) {
  require_range(a, kOne, false, "a");
  require_range(b, kOne, false, "b");
  require_range(c, kOne, false, "c");
  YoungCheck y;
  y.a = a;
  y.b = b;
  y.c = c;
  y.lhs = a.reciprocal() + b.reciprocal() - kOne;
  y.admissible = y.lhs == c.reciprocal();
  return y;
}

}  // namespace nslab
