// cli.hpp
// Command dispatch for the qdiag tool: analyze, sweep, thresholds, table1,
// oracle. Exit codes: 0 success, 2 usage error, 3 data-validation error.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "analysis.hpp"
#include "criteria.hpp"
#include "record.hpp"
#include "states.hpp"

namespace qdiag::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

/// Replaceable pieces of the pipeline; tests substitute a faulty evaluator
/// to check that `table1 --verify` notices.
struct Hooks {
  Evaluator evaluate = full_report;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using qdiag::detail::fixed;

struct StateArgs {
  std::string state;
  std::optional<int> n;
  std::optional<double> p;
  std::string input;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--state", state, "w | ghz | mixture")->check(CLI::IsMember({"w", "ghz", "mixture"}));
    cmd.add_option("--n", n, "number of qubits in the parent W/GHZ states");
    cmd.add_option("--p", p, "weight of the W term (mixture only)");
    cmd.add_option("--input", input, "density file {\"dim\":4,\"re\":[...],\"im\":[...]}");
  }
};

struct ResolvedState {
  TwoQubitDensity rho;
  OutputRecord meta;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DensityError(DensityFault::Parse, "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline ResolvedState resolve(const StateArgs& a) {
  if (a.state.empty() == a.input.empty()) throw UsageError("give exactly one of --state or --input");
  if (!a.input.empty()) {
    if (a.n || a.p) throw UsageError("--n and --p do not apply to --input");
    OutputRecord meta;
    meta.state_kind = "file";
    return {load_density(read_file(a.input)), meta};
  }
  if (!a.n) throw UsageError("--state needs --n");
  if (*a.n < 3) throw UsageError("--n must be at least 3");
  OutputRecord meta;
  meta.state_kind = a.state;
  meta.n = *a.n;
  if (a.state == "mixture") {
    if (!a.p) throw UsageError("--state mixture needs --p");
    if (!(*a.p >= 0.0 && *a.p <= 1.0)) throw UsageError("--p must lie in [0, 1]");
    meta.p = *a.p;
    return {mixture_ghz_w({*a.n, *a.p}), meta};
  }
  if (a.p) throw UsageError("--p applies only to --state mixture");
  if (a.state == "w") {
    const WPairFidelity fid = w_pair_fidelity(*a.n);
    if (fid.deviates) {
      meta.notes.push_back("F_max = " + fixed(fid.f_max) + " for the reduced W pair at n=" + std::to_string(*a.n) +
                           ", not the 2/3 that holds for n >= 4");
    }
    return {reduced_w_pair(*a.n), meta};
  }
  return {reduced_ghz_pair(*a.n), meta};
}

inline void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (format == a) return;
  throw UsageError("unsupported --format '" + format + "'");
}

inline std::string optional_fixed(const std::optional<double>& x) { return x ? fixed(*x) : "absent"; }

}  // namespace detail

/// Runs one command line (without the program name). All normal output goes
/// to `out`, diagnostics to `err`.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err, const Hooks& hooks = {}) {
  using detail::fixed;
  CLI::App app{"Entanglement, CHSH and teleportation diagnostics for two-qubit states", "qdiag"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // analyze
  detail::StateArgs analyze_state;
  std::string analyze_format = "text";
  bool emit_density = false;
  CLI::App* analyze = app.add_subcommand("analyze", "full diagnostics report for one state");
  analyze_state.add_to(*analyze);
  analyze->add_option("--format", analyze_format, "text | json");
  analyze->add_flag("--emit-density", emit_density, "print the density file document instead of the report");

  // sweep
  int sweep_n = 0, sweep_steps = 0;
  double p_start = 0.0, p_end = 0.0;
  std::string sweep_format = "csv";
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "evaluate the W/GHZ mixture on a uniform p grid");
  sweep_cmd->add_option("--n", sweep_n)->required();
  sweep_cmd->add_option("--p-start", p_start)->required();
  sweep_cmd->add_option("--p-end", p_end)->required();
  sweep_cmd->add_option("--steps", sweep_steps)->required();
  sweep_cmd->add_option("--format", sweep_format, "csv | json");

  // thresholds
  int thr_n = 0;
  std::string thr_format = "text";
  CLI::App* thr_cmd = app.add_subcommand("thresholds", "critical mixing probabilities for one n");
  thr_cmd->add_option("--n", thr_n)->required();
  thr_cmd->add_option("--format", thr_format, "text | json");

  // table1
  std::string table_format = "text";
  bool verify = false;
  CLI::App* table_cmd = app.add_subcommand("table1", "entanglement / CHSH / teleportation table for n = 3, 4, 5");
  table_cmd->add_option("--format", table_format, "text | json");
  table_cmd->add_flag("--verify", verify, "recompute every cell through the matrix pipeline");

  // oracle
  detail::StateArgs oracle_state;
  std::string kind;
  OracleOptions oracle_opt;
  std::string oracle_format = "text";
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "numerical optimization cross-checks");
  oracle_cmd->add_option("--kind", kind, "chsh | fef")->required()->check(CLI::IsMember({"chsh", "fef"}));
  oracle_state.add_to(*oracle_cmd);
  oracle_cmd->add_option("--restarts", oracle_opt.restarts, "random restarts (default 32)");
  oracle_cmd->add_option("--iters", oracle_opt.iters, "coordinate-ascent sweeps per start (default 200)");
  oracle_cmd->add_option("--seed", oracle_opt.seed, "random seed (default 0)");
  oracle_cmd->add_option("--format", oracle_format, "text | json");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze) {
      detail::require_format(analyze_format, {"text", "json"});
      auto [rho, rec] = detail::resolve(analyze_state);
      if (emit_density) {
        out << density_to_json(rho).dump(2) << '\n';
        return kExitOk;
      }
      rec.report = hooks.evaluate(rho);
      if (analyze_format == "json") {
        out << record_to_json(rec).dump(2) << '\n';
      } else {
        write_report_text(out, rec);
      }
      return kExitOk;
    }

    if (*sweep_cmd) {
      detail::require_format(sweep_format, {"csv", "json"});
      if (sweep_n < 3) throw UsageError("--n must be at least 3");
      if (!(p_start >= 0.0 && p_end <= 1.0 && p_start < p_end)) {
        throw UsageError("need 0 <= --p-start < --p-end <= 1");
      }
      if (sweep_steps < 2) throw UsageError("--steps must be at least 2");
      const auto points = qdiag::sweep(sweep_n, p_start, p_end, sweep_steps, hooks.evaluate);
      if (sweep_format == "csv") {
        out << kCsvHeader << '\n';
        for (const auto& pt : points) out << csv_row(pt.p, pt.report) << '\n';
      } else {
        for (const auto& pt : points) {
          OutputRecord rec;
          rec.state_kind = "mixture";
          rec.n = sweep_n;
          rec.p = pt.p;
          rec.report = pt.report;
          out << record_to_json(rec).dump() << '\n';
        }
      }
      return kExitOk;
    }

    if (*thr_cmd) {
      detail::require_format(thr_format, {"text", "json"});
      if (thr_n < 3) throw UsageError("--n must be at least 3");
      const ThresholdReport r = thresholds(thr_n);
      if (thr_format == "json") {
        ordered_json j;
        j["n"] = r.n;
        j["p_entangled"] = r.p_entangled;
        j["certified"] = r.certificate.certified;
        j["bisection"] = r.certificate.bisection;
        j["p_teleport"] = r.p_teleport ? ordered_json(*r.p_teleport) : ordered_json(nullptr);
        j["teleport_attainable"] = r.teleport_attainable;
        j["p_bell"] = r.p_bell ? ordered_json(*r.p_bell) : ordered_json(nullptr);
        out << j.dump(2) << '\n';
        return kExitOk;
      }
      out << "n = " << r.n << '\n';
      out << "p_entangled = " << fixed(r.p_entangled) << " (W4 < 0 for p in (" << fixed(r.p_entangled)
          << ", 1]; certified: bisection " << format_full(r.certificate.bisection) << ", bracket "
          << format_full(r.certificate.bracket_below) << " / " << format_full(r.certificate.bracket_above) << ")\n";
      out << "p_teleport = " << detail::optional_fixed(r.p_teleport);
      if (r.p_teleport && r.teleport_attainable) {
        out << " (F_max > 2/3 for p in (" << fixed(*r.p_teleport) << ", 1])";
      } else if (r.p_teleport) {
        out << " (boundary, unattainable for p < 1)";
      } else {
        out << " (n/4 = " << fixed(r.n / 4.0) << " > 1; F_max = 2/3 for every p)";
      }
      out << '\n';
      out << "p_bell = " << detail::optional_fixed(r.p_bell);
      if (!r.p_bell) {
        out << " (derived from M = 8p^2/n^2: n/(2 sqrt 2) = " << fixed(r.n / (2.0 * std::numbers::sqrt2))
            << " > 1; no CHSH violation for any p)";
      }
      out << '\n';
      return kExitOk;
    }

    if (*table_cmd) {
      detail::require_format(table_format, {"text", "json"});
      const auto rows = table1();
      std::vector<CellCheck> checks;
      if (verify) checks = verify_table1(hooks.evaluate);
      const bool all_pass = std::all_of(checks.begin(), checks.end(), [](const CellCheck& c) { return c.pass; });
      const std::string interval_note =
          "F_max > 2/3 interval for n=3 includes p = 1 (F_max(1) = 13/18)";

      if (table_format == "json") {
        ordered_json j;
        j["rows"] = ordered_json::array();
        for (const auto& row : rows) {
          ordered_json r;
          r["n"] = row.n;
          r["p_entangled"] = row.p_entangled;
          r["entangled_range"] = entangled_range_label(row);
          r["m_formula"] = row.m_formula;
          r["m_at_most_one"] = row.m_at_most_one;
          r["p_teleport"] = row.p_teleport ? ordered_json(*row.p_teleport) : ordered_json(nullptr);
          r["f_max_above_two_thirds"] = teleport_label(row);
          j["rows"].push_back(std::move(r));
        }
        j["notes"] = {interval_note};
        if (verify) {
          j["verify"] = ordered_json::array();
          for (const auto& c : checks) {
            j["verify"].push_back(
                {{"n", c.n}, {"column", c.column}, {"expected", c.expected}, {"observed", c.observed}, {"pass", c.pass}});
          }
        }
        out << j.dump(2) << '\n';
      } else {
        out << "N | W4<0 (range of p) | M | M<=1 | F_max>2/3\n";
        for (const auto& row : rows) {
          out << row.n << " | " << entangled_range_label(row) << " | " << row.m_formula << " | "
              << (row.m_at_most_one ? "Yes" : "No") << " | " << teleport_label(row) << '\n';
        }
        out << "note: " << interval_note << '\n';
        for (const auto& c : checks) {
          out << (c.pass ? "PASS" : "FAIL") << " N=" << c.n << " " << c.column << ": expected " << c.expected
              << ", observed " << c.observed << '\n';
        }
        if (verify) out << (all_pass ? "all cells PASS" : "verification FAILED") << '\n';
      }
      return all_pass ? kExitOk : kExitData;
    }

    if (*oracle_cmd) {
      detail::require_format(oracle_format, {"text", "json"});
      if (oracle_opt.restarts < 1 || oracle_opt.iters < 1) throw UsageError("--restarts and --iters must be >= 1");
      auto [rho, rec] = detail::resolve(oracle_state);
      const DiagnosticsReport report = hooks.evaluate(rho);
      ordered_json j;
      j["kind"] = kind;
      j["state"] = rec.state_kind;
      j["n"] = rec.n ? ordered_json(*rec.n) : ordered_json(nullptr);
      j["p"] = rec.p ? ordered_json(*rec.p) : ordered_json(nullptr);
      j["seed"] = oracle_opt.seed;
      j["restarts"] = oracle_opt.restarts;
      j["iters"] = oracle_opt.iters;
      if (kind == "chsh") {
        const double value = chsh_maximize(rho, oracle_opt);
        const double target = 2.0 * std::sqrt(report.m_value);
        j["value"] = value;
        j["target"] = target;
        j["gap"] = std::abs(target - value);
      } else {
        const FefResult fef = fully_entangled_fraction(rho, oracle_opt);
        j["f"] = fef.f;
        j["locc_fidelity"] = fef.locc_fidelity;
        j["f_max"] = report.f_max;
        rec.notes.push_back("(2f+1)/3 and F_max come from different teleportation protocols; no equality is implied");
      }
      j["notes"] = rec.notes;
      if (oracle_format == "json") {
        out << j.dump(2) << '\n';
        return kExitOk;
      }
      out << "oracle: " << kind << " (seed " << oracle_opt.seed << ", restarts " << oracle_opt.restarts << ", iters "
          << oracle_opt.iters << ")\n";
      out << "state: " << rec.state_kind;
      if (rec.n) out << " n=" << *rec.n;
      if (rec.p) out << " p=" << fixed(*rec.p);
      out << '\n';
      if (kind == "chsh") {
        out << "chsh_max = " << fixed(j["value"].get<double>()) << '\n';
        out << "target 2*sqrt(M) = " << fixed(j["target"].get<double>()) << '\n';
        out << "gap = " << format_full(j["gap"].get<double>()) << '\n';
      } else {
        out << "f = " << fixed(j["f"].get<double>()) << '\n';
        out << "implied fidelity (2f+1)/3 = " << fixed(j["locc_fidelity"].get<double>()) << '\n';
        out << "F_max = " << fixed(j["f_max"].get<double>()) << '\n';
      }
      for (const auto& note : rec.notes) out << "note: " << note << '\n';
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DensityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace qdiag::cli
