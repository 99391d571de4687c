// record.hpp
// Serialization of diagnostics: JSON records, CSV rows and human text.
// Machine formats render every double so that parsing it back yields the
// same bits; human text uses 6 decimals (9 for the small determinants).

#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "criteria.hpp"

namespace qdiag {

inline constexpr std::string_view kToolVersion = "0.1.0";

using ordered_json = nlohmann::ordered_json;

/// A DiagnosticsReport plus the metadata needed to reproduce it.
struct OutputRecord {
  std::string state_kind;  // "w", "ghz", "mixture" or "file"
  std::optional<int> n;
  std::optional<double> p;
  std::string tool_version{kToolVersion};
  std::optional<std::uint64_t> seed;
  DiagnosticsReport report;
  std::vector<std::string> notes;
};

/// 17 significant digits, locale independent.
inline std::string format_full(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_full(std::string_view s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("parse_full: not a number: " + std::string(s));
  }
  return x;
}

inline ordered_json report_to_json(const DiagnosticsReport& r) {
  ordered_json j;
  j["w3"] = r.w3;
  j["w4"] = r.w4;
  j["ppt_spectrum"] = r.ppt_spectrum;
  j["u"] = r.u;
  j["m"] = r.m_value;
  j["f_max"] = r.f_max;
  j["entangled"] = r.entangled;
  j["bell_violating"] = r.bell_violating;
  j["teleport_useful"] = r.teleport_useful;
  return j;
}

inline DiagnosticsReport report_from_json(const ordered_json& j) {
  DiagnosticsReport r;
  r.w3 = j.at("w3").get<double>();
  r.w4 = j.at("w4").get<double>();
  r.ppt_spectrum = j.at("ppt_spectrum").get<std::array<double, 4>>();
  r.u = j.at("u").get<std::array<double, 3>>();
  r.m_value = j.at("m").get<double>();
  r.f_max = j.at("f_max").get<double>();
  r.entangled = j.at("entangled").get<bool>();
  r.bell_violating = j.at("bell_violating").get<bool>();
  r.teleport_useful = j.at("teleport_useful").get<bool>();
  return r;
}

inline ordered_json record_to_json(const OutputRecord& rec) {
  ordered_json j;
  j["tool_version"] = rec.tool_version;
  j["state"] = rec.state_kind;
  j["n"] = rec.n ? ordered_json(*rec.n) : ordered_json(nullptr);
  j["p"] = rec.p ? ordered_json(*rec.p) : ordered_json(nullptr);
  j["seed"] = rec.seed ? ordered_json(*rec.seed) : ordered_json(nullptr);
  j["report"] = report_to_json(rec.report);
  j["notes"] = rec.notes;
  return j;
}

inline OutputRecord record_from_json(const ordered_json& j) {
  OutputRecord rec;
  rec.tool_version = j.at("tool_version").get<std::string>();
  rec.state_kind = j.at("state").get<std::string>();
  if (!j.at("n").is_null()) rec.n = j.at("n").get<int>();
  if (!j.at("p").is_null()) rec.p = j.at("p").get<double>();
  if (!j.at("seed").is_null()) rec.seed = j.at("seed").get<std::uint64_t>();
  rec.report = report_from_json(j.at("report"));
  rec.notes = j.at("notes").get<std::vector<std::string>>();
  return rec;
}

inline constexpr std::string_view kCsvHeader =
    "p,w3,w4,ppt_min,u1,u2,u3,m,f_max,entangled,bell_violating,teleport_useful";

inline std::string csv_row(double p, const DiagnosticsReport& r) {
  auto b = [](bool v) { return v ? "true" : "false"; };
  std::string s;
  for (double x : {p, r.w3, r.w4, r.ppt_min(), r.u[0], r.u[1], r.u[2], r.m_value, r.f_max}) {
    s += format_full(x);
    s += ',';
  }
  s += b(r.entangled);
  s += ',';
  s += b(r.bell_violating);
  s += ',';
  s += b(r.teleport_useful);
  return s;
}

namespace detail {

inline std::string fixed(double x, int decimals = 6) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, decimals);
  std::string s(buf, res.ptr);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);  // no "-0.000000"
  return s;
}

inline std::string verdict(bool value, Band b) {
  std::string s = value ? "yes" : "no";
  if (b == Band::Boundary) s += " (boundary)";
  return s;
}

}  // namespace detail

inline void write_report_text(std::ostream& out, const OutputRecord& rec) {
  using detail::fixed;
  const DiagnosticsReport& r = rec.report;
  out << "state: " << rec.state_kind;
  if (rec.n) out << " n=" << *rec.n;
  if (rec.p) out << " p=" << fixed(*rec.p);
  out << '\n';
  out << "w3 = " << fixed(r.w3, 9) << '\n';
  out << "w4 = " << fixed(r.w4, 9) << '\n';
  out << "ppt_spectrum = [" << fixed(r.ppt_spectrum[0]) << ", " << fixed(r.ppt_spectrum[1]) << ", "
      << fixed(r.ppt_spectrum[2]) << ", " << fixed(r.ppt_spectrum[3]) << "]\n";
  out << "u = [" << fixed(r.u[0]) << ", " << fixed(r.u[1]) << ", " << fixed(r.u[2]) << "]\n";
  out << "M = " << fixed(r.m_value) << '\n';
  out << "F_max = " << fixed(r.f_max) << '\n';
  out << "entangled = " << detail::verdict(r.entangled, r.entanglement_band()) << '\n';
  out << "bell_violating = " << detail::verdict(r.bell_violating, r.bell_band()) << '\n';
  out << "teleport_useful = " << detail::verdict(r.teleport_useful, r.teleport_band()) << '\n';
  for (const auto& note : rec.notes) out << "note: " << note << '\n';
}

}  // namespace qdiag
