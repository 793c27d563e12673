/// @file ledger.hpp
/// @brief Exact exponent bookkeeping: Serrin classification, the vorticity
///        bootstrap schedule, pressure integrability thresholds, and the
///        exponent systems behind the source-term estimates. All arithmetic
///        is exact rational (with infinity); no floating point.
#pragma once

#include <string>
#include <vector>

#include "nslab/rational.hpp"

namespace nslab {

class LedgerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SerrinClass { subcritical, critical, supercritical };

std::string to_string(SerrinClass c);

struct SerrinReport {
  ExtRational q, s;
  ExtRational value;  // 3/q + 2/s
  SerrinClass cls = SerrinClass::critical;
};

/// Exact comparison of 3/q + 2/s with 1. Requires q in (1, inf], s in [1, inf].
SerrinReport serrin_classify(const ExtRational& q, const ExtRational& s);

struct BootstrapSchedule {
  ExtRational q, s;
  ExtRational margin;  // 1 - 3/q - 2/s > 0
  long long K = 0;     // least integer with 2/(3K) < margin/5
  ExtRational sigma;   // 2/(3K)
  std::vector<ExtRational> p;  // p_0..p_K, 1/p_k = 2/3 - k*sigma
  std::vector<ExtRational> a;  // 1/a_k = 1/p_k + 1/s
  std::vector<ExtRational> b;  // 1/b_k = 1/p_k + 1/q
  bool all_a_ge_1 = false;
  bool all_b_ge_1 = false;
  bool terminal_infinite = false;  // p_K = inf
  bool k_minimal = false;          // K-1 violates the sigma inequality
};

/// Requires 3 < q <= inf, 3 <= s <= inf and subcriticality 3/q + 2/s < 1.
BootstrapSchedule bootstrap_schedule(const ExtRational& q,
                                     const ExtRational& s);

struct PressureMReport {
  ExtRational q, m;
  ExtRational threshold;       // 2q/(3(q-2))
  bool holds = false;          // m > threshold
  bool implied_by_m_ge_1 = false;  // threshold < 1
};

/// Requires q > 2 (finite or infinite q).
PressureMReport pressure_m_condition(const ExtRational& q,
                                     const ExtRational& m);

struct Step1Ledger {
  ExtRational q, s, m, delta;
  ExtRational a, b, r, rho;
  bool b_window = false;      // 1 <= b < 3/2
  bool a15 = false;           // (3/2 - 3/(2a)) * rho < 1
  bool equivalent_form = false;  // 1/m < 3/s + 3/(2(q+delta))
  bool forms_agree = false;   // a15 == equivalent_form
};

/// Exponent system of the source-term step: with r = q, derives a, b, rho
/// from 1/(q+delta) = 1/a + 2/q - 1 = 1/b + 1/r - 1 and
/// 1/s = 1/m + 1/rho - 1, then evaluates both forms of the integrability
/// condition. Requires criticality 3/q + 2/s = 1, q > 3, delta >= 0, m >= 1.
Step1Ledger appendix_step1_conditions(const ExtRational& q,
                                      const ExtRational& s,
                                      const ExtRational& m,
                                      const ExtRational& delta);

struct DeltaWindow {
  ExtRational lo;  // inclusive
  ExtRational hi;  // exclusive, 3(m-2)/2
};

/// Requires m > 2.
DeltaWindow lemma31_delta_window(const ExtRational& m);

struct YoungCheck {
  ExtRational a, b, c;
  ExtRational lhs;  // 1/a + 1/b - 1
  bool admissible = false;  // lhs == 1/c
};

/// Convolution exponent admissibility 1/c = 1/a + 1/b - 1 (exponents in
/// [1, inf]; the norm inequality itself is exercised numerically elsewhere).
YoungCheck young_convolution_check(const ExtRational& a, const ExtRational& b,
                                   const ExtRational& c);

}  // namespace nslab
