// analysis.hpp
// Parameter-space analysis of the W/GHZ mixture: eigenvalue regimes,
// critical mixing probabilities, p-grid sweeps and the N = 3, 4, 5 table.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "criteria.hpp"
#include "states.hpp"

namespace qdiag {

/// Thrown when the closed-form threshold and its bisection cross-check
/// disagree.
class CertificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class MCase { PairDegenerateDominant, ThirdDominant, FullyDegenerate };
enum class FCase { Classical, SuperClassical };

inline std::string_view to_string(MCase c) {
  switch (c) {
    case MCase::PairDegenerateDominant: return "pair-degenerate-dominant";
    case MCase::ThirdDominant: return "third-dominant";
    case MCase::FullyDegenerate: return "fully-degenerate";
  }
  return "unknown";
}

inline std::string_view to_string(FCase c) {
  return c == FCase::Classical ? "classical" : "super-classical";
}

struct RegimeLabel {
  MCase m_case = MCase::ThirdDominant;
  FCase f_case = FCase::Classical;
  friend bool operator==(const RegimeLabel&, const RegimeLabel&) = default;
};

namespace closed_form {

// Mixture correlation spectrum: u1 = u2 = 4p^2/n^2, u3 = (n - 4p)^2 / n^2.
inline double u_pair(int n, double p) { return 4.0 * p * p / (double(n) * n); }
inline double u_third(int n, double p) { return (n - 4.0 * p) * (n - 4.0 * p) / (double(n) * n); }

/// M for the given regime: u1 + u2 or u1 + u3.
inline double m_value(MCase c, int n, double p) {
  return c == MCase::ThirdDominant ? u_pair(n, p) + u_third(n, p) : 2.0 * u_pair(n, p);
}

/// 2p(1-p)N(N-2) + (1-p)^2 N^2 - 4p^2; W4 of the mixture has the sign of
/// this bracket.
inline double entanglement_bracket(int n, double p) {
  const double nn = n;
  return 2.0 * p * (1.0 - p) * nn * (nn - 2.0) + (1.0 - p) * (1.0 - p) * nn * nn - 4.0 * p * p;
}

inline double w3(int n, double p) { return (p * (n - 2.0) / n + (1.0 - p) / 2.0) * p * p / (double(n) * n); }
inline double w4(int n, double p) {
  return p * p / (4.0 * std::pow(double(n), 4)) * entanglement_bracket(n, p);
}

/// 2/3 for p <= n/4, 1/2 + (8p - n)/(6n) above.
inline double f_max(int n, double p) { return p <= n / 4.0 ? 2.0 / 3.0 : 0.5 + (8.0 * p - n) / (6.0 * n); }

}  // namespace closed_form

inline void check_mixture_domain(int n, double p, const char* who) {
  if (n < 3) throw DomainError(std::string(who) + ": n must be at least 3");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(who) + ": p must lie in [0, 1]");
}

/// Orders u1 = u2 against u3; ties within kSignTol are fully degenerate.
inline RegimeLabel classify_regime(int n, double p) {
  check_mixture_domain(n, p, "classify_regime");
  RegimeLabel label;
  switch (band(closed_form::u_pair(n, p), closed_form::u_third(n, p))) {
    case Band::Above: label.m_case = MCase::PairDegenerateDominant; break;
    case Band::Below: label.m_case = MCase::ThirdDominant; break;
    case Band::Boundary: label.m_case = MCase::FullyDegenerate; break;
  }
  label.f_case = p <= n / 4.0 ? FCase::Classical : FCase::SuperClassical;
  return label;
}

struct ThresholdCertificate {
  double closed_form = 0.0;
  double bisection = 0.0;
  double bracket_below = 0.0;  // bracket at the lower end of the final bisection interval
  double bracket_above = 0.0;  // and at the upper end
  bool certified = false;
};

/// Root in (0, 1) of the entanglement bracket. Expanded, the bracket is
/// -(n-2)^2 p^2 - 4n p + n^2, whose positive root is n / (2 + sqrt(4 + (n-2)^2)).
/// Cross-checked by bisection on the unexpanded bracket down to a 1e-12
/// interval; a gap above 1e-10 throws CertificationError.
inline ThresholdCertificate certify_entanglement_threshold(int n) {
  if (n < 3) throw DomainError("entanglement_threshold: n must be at least 3");
  ThresholdCertificate cert;
  const double nm2 = n - 2.0;
  cert.closed_form = n / (2.0 + std::sqrt(4.0 + nm2 * nm2));

  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (closed_form::entanglement_bracket(n, mid) > 0.0 ? lo : hi) = mid;
  }
  cert.bisection = 0.5 * (lo + hi);
  cert.bracket_below = closed_form::entanglement_bracket(n, lo);
  cert.bracket_above = closed_form::entanglement_bracket(n, hi);
  cert.certified = cert.bracket_below > 0.0 && cert.bracket_above < 0.0 &&
                   std::abs(cert.closed_form - cert.bisection) <= 1e-10;
  if (!cert.certified) {
    std::ostringstream msg;
    msg << "entanglement threshold for n=" << n << " failed certification: closed form " << cert.closed_form
        << " vs bisection " << cert.bisection;
    throw CertificationError(msg.str());
  }
  return cert;
}

inline double entanglement_threshold(int n) { return certify_entanglement_threshold(n).closed_form; }

struct ThresholdReport {
  int n = 3;
  double p_entangled = 0.0;
  ThresholdCertificate certificate;
  /// n/4 when <= 1.
  std::optional<double> p_teleport;
  /// False when p_teleport == 1: F_max > 2/3 needs p strictly above it.
  bool teleport_attainable = false;
  /// n / (2 sqrt 2) when <= 1, from M = 8p^2/n^2 = 1.
  std::optional<double> p_bell;
};

inline ThresholdReport thresholds(int n) {
  ThresholdReport r;
  r.n = n;
  r.certificate = certify_entanglement_threshold(n);
  r.p_entangled = r.certificate.closed_form;
  const double teleport = n / 4.0;
  if (teleport <= 1.0) {
    r.p_teleport = teleport;
    r.teleport_attainable = teleport < 1.0;
  }
  const double bell = n / (2.0 * std::numbers::sqrt2);
  if (bell <= 1.0) r.p_bell = bell;
  return r;
}

struct SweepPoint {
  double p = 0.0;
  DiagnosticsReport report;
};

using Evaluator = std::function<DiagnosticsReport(const TwoQubitDensity&)>;

/// Inclusive uniform grid p_start + (p_end - p_start) * i / (steps - 1).
inline std::vector<double> p_grid(double p_start, double p_end, int steps) {
  if (!(p_start >= 0.0 && p_end <= 1.0 && p_start < p_end)) {
    throw DomainError("sweep: need 0 <= p_start < p_end <= 1");
  }
  if (steps < 2) throw DomainError("sweep: steps must be at least 2");
  std::vector<double> grid(steps);
  for (int i = 0; i < steps; ++i) grid[i] = p_start + (p_end - p_start) * i / (steps - 1);
  grid.back() = p_end;
  return grid;
}

inline std::vector<SweepPoint> sweep(int n, double p_start, double p_end, int steps,
                                     const Evaluator& evaluate = full_report) {
  if (n < 3) throw DomainError("sweep: n must be at least 3");
  std::vector<SweepPoint> out;
  for (double p : p_grid(p_start, p_end, steps)) out.push_back({p, evaluate(mixture_ghz_w({n, p}))});
  return out;
}

/// F_max of the reduced W pair against the 2/3 expected for the whole family.
struct WPairFidelity {
  int n = 3;
  double f_max = 0.0;
  double expected = 2.0 / 3.0;
  bool deviates = false;
};

inline WPairFidelity w_pair_fidelity(int n) {
  WPairFidelity w;
  w.n = n;
  w.f_max = f_max(reduced_w_pair(n));
  w.deviates = std::abs(w.f_max - w.expected) > 1e-12;
  return w;
}

// ---------------------------------------------------------------------------
// Table of entanglement / CHSH / teleportation verdicts for N = 3, 4, 5.

struct Table1Row {
  int n = 3;
  double p_entangled = 0.0;          // entangled on (p_entangled, 1]
  std::string m_formula;             // "8p^2/9", ...
  double m_coefficient = 0.0;        // M = m_coefficient * p^2 on the entangled range
  bool m_at_most_one = true;
  std::optional<double> p_teleport;  // F_max > 2/3 on (p_teleport, 1] when present
};

/// Reference table rows, with thresholds at the printed three-decimal
/// precision.
inline std::vector<Table1Row> reference_table1() {
  return {
      {3, 0.708, "8p^2/9", 8.0 / 9.0, true, 0.75},
      {4, 0.828, "p^2/2", 0.5, true, std::nullopt},
      {5, 0.891, "8p^2/25", 8.0 / 25.0, true, std::nullopt},
  };
}

inline std::string format_m_formula(int n) {
  // 8/n^2 reduced by gcd.
  int num = 8, den = n * n;
  int a = num, b = den;
  while (b != 0) a = std::exchange(b, a % b);
  num /= a;
  den /= a;
  std::string s = (num == 1 ? "" : std::to_string(num)) + "p^2";
  return den == 1 ? s : s + "/" + std::to_string(den);
}

inline Table1Row computed_table1_row(int n) {
  Table1Row row;
  row.n = n;
  row.p_entangled = entanglement_threshold(n);
  row.m_formula = format_m_formula(n);
  row.m_coefficient = 8.0 / (double(n) * n);
  // M = 8p^2/n^2 <= 8/n^2 on the pair-dominant range and <= 1 on the other.
  row.m_at_most_one = true;
  const double t = n / 4.0;
  if (t < 1.0) row.p_teleport = t;
  return row;
}

inline std::vector<Table1Row> table1() { return {computed_table1_row(3), computed_table1_row(4), computed_table1_row(5)}; }

inline std::string entangled_range_label(const Table1Row& row) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(6);
  s << "(" << row.p_entangled << ", 1]";
  return s.str();
}

inline std::string teleport_label(const Table1Row& row) {
  if (!row.p_teleport) return "No";
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(6);
  s << "Yes (" << *row.p_teleport << ", 1], No (" << row.p_entangled << ", " << *row.p_teleport << "]";
  return s.str();
}

struct CellCheck {
  int n = 3;
  std::string column;
  std::string expected;
  std::string observed;
  bool pass = false;
};

/// Recomputes every cell of the reference table through `evaluate` applied to
/// mixture densities, one CellCheck per cell.
inline std::vector<CellCheck> verify_table1(const Evaluator& evaluate = full_report) {
  std::vector<CellCheck> out;
  const auto grid = p_grid(0.0, 1.0, 101);
  for (const Table1Row& ref : reference_table1()) {
    const int n = ref.n;
    auto at = [&](double p) { return evaluate(mixture_ghz_w({n, p})); };

    {
      // W4 < 0 exactly on (threshold, 1], threshold matching the printed value.
      const double thr = entanglement_threshold(n);
      const auto below = at(thr - 1e-3), above = at(thr + 1e-3), top = at(1.0);
      bool ok = std::abs(thr - ref.p_entangled) <= 2e-3;
      ok = ok && below.w4 > 0.0 && !below.entangled;
      ok = ok && above.w4 < 0.0 && above.entangled;
      ok = ok && top.w4 < 0.0 && top.entangled;
      for (double p : grid) {
        const auto r = at(p);
        ok = ok && ((r.w4 < -kSignTol) == (p > thr)) && (r.entangled == (p > thr));
      }
      std::ostringstream exp, obs;
      exp << "(" << ref.p_entangled << ", 1)";
      obs.setf(std::ios::fixed);
      obs.precision(6);
      obs << "(" << thr << ", 1]";
      out.push_back({n, "W4<0 range", exp.str(), obs.str(), ok});
    }
    {
      // The row's formula describes M on its entangled range; sample points
      // below the threshold are listed but not compared.
      const double thr = entanglement_threshold(n);
      std::vector<double> samples, skipped;
      for (double p : {0.8, 0.9, 0.95}) (p > thr ? samples : skipped).push_back(p);
      for (double p : grid)
        if (p > thr) samples.push_back(p);
      bool ok = !samples.empty();
      double worst = 0.0;
      for (double p : samples) {
        const double gap = std::abs(at(p).m_value - ref.m_coefficient * p * p);
        worst = std::max(worst, gap);
        ok = ok && gap <= 1e-12;
      }
      std::ostringstream obs;
      obs << format_m_formula(n) << " (max gap " << worst << " over " << samples.size() << " points";
      for (double p : skipped) obs << "; p=" << p << " below range, M=" << at(p).m_value;
      obs << ")";
      out.push_back({n, "M formula", ref.m_formula, obs.str(), ok && format_m_formula(n) == ref.m_formula});
    }
    {
      bool ok = true;
      double worst = 0.0;
      for (double p : grid) {
        const auto r = at(p);
        worst = std::max(worst, r.m_value);
        ok = ok && r.m_value <= 1.0 + kSignTol && !r.bell_violating;
      }
      std::ostringstream obs;
      obs << (ok ? "Yes" : "No") << " (max M " << worst << ")";
      out.push_back({n, "M<=1", ref.m_at_most_one ? "Yes" : "No", obs.str(), ok == ref.m_at_most_one});
    }
    {
      bool ok = true;
      for (double p : grid) {
        const bool expected = ref.p_teleport ? p > *ref.p_teleport : false;
        ok = ok && at(p).teleport_useful == expected;
      }
      const Table1Row computed = computed_table1_row(n);
      ok = ok && computed.p_teleport == ref.p_teleport;
      std::ostringstream exp;
      if (ref.p_teleport) {
        exp << "Yes (" << *ref.p_teleport << ", 1], No (" << ref.p_entangled << ", " << *ref.p_teleport << "]";
      } else {
        exp << "No";
      }
      out.push_back({n, "F_max>2/3", exp.str(), teleport_label(computed), ok});
    }
  }
  return out;
}

}  // namespace qdiag
