// SPDX-License-Identifier: Apache-2.0
#include "seqinfer/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "seqinfer/errors.hpp"

namespace seqinfer {

using nlohmann::json;

namespace {

constexpr const char* kCoverageHeader = "mu,method,L_pct,U_pct,L_se,U_se,mean_length,mean_T";

// JSON has no inf or nan; those go out as strings.
json number_json(double x) {
  if (!std::isfinite(x)) return format_number(x);
  return std::strtod(format_number(x).c_str(), nullptr);
}

json exact_json(double x) {
  if (!std::isfinite(x)) return format_number(x);
  return x;
}

double number_from(const json& v, const char* field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end != s.c_str() && *end == '\0') return x;
  }
  throw Error(std::string("report: bad value for ") + field);
}

double parse_field(const std::string& s, int line) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw Error("report line " + std::to_string(line) + ": bad number \"" + s + "\"");
  return x;
}

Method method_from(const std::string& s) {
  const auto m = parse_method(s);
  if (!m) throw Error("report: unknown method \"" + s + "\"");
  return *m;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

std::string level_name(double level) { return format_number(level); }

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string render_report(const CoverageReport& report, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out = kCoverageHeader;
    out += '\n';
    for (const auto& r : report.rows) {
      out += format_number(r.mu) + ',' + std::string(method_name(r.method)) + ',' + format_number(r.L_pct) + ',' +
             format_number(r.U_pct) + ',' + format_number(r.L_se) + ',' + format_number(r.U_se) + ',' +
             format_number(r.mean_length) + ',' + format_number(r.mean_T) + '\n';
    }
    return out;
  }
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back(json{{"mu", number_json(r.mu)},
                        {"method", std::string(method_name(r.method))},
                        {"L_pct", number_json(r.L_pct)},
                        {"U_pct", number_json(r.U_pct)},
                        {"L_se", number_json(r.L_se)},
                        {"U_se", number_json(r.U_se)},
                        {"mean_length", number_json(r.mean_length)},
                        {"mean_T", number_json(r.mean_T)}});
  }
  return json{{"rows", rows}}.dump(2) + '\n';
}

void write_report(const CoverageReport& report, const std::filesystem::path& path, ReportFormat format) {
  write_text(path, render_report(report, format));
}

CoverageReport parse_report(std::string_view text, ReportFormat format) {
  CoverageReport report;
  if (format == ReportFormat::Csv) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != kCoverageHeader) throw Error("report: missing CSV header");
    for (int lineno = 2; std::getline(in, line); ++lineno) {
      if (line.empty()) continue;
      std::vector<std::string> f;
      std::istringstream ls(line);
      for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
      if (f.size() != 8) throw Error("report line " + std::to_string(lineno) + ": expected 8 fields");
      CoverageRow r;
      r.mu = parse_field(f[0], lineno);
      r.method = method_from(f[1]);
      r.L_pct = parse_field(f[2], lineno);
      r.U_pct = parse_field(f[3], lineno);
      r.L_se = parse_field(f[4], lineno);
      r.U_se = parse_field(f[5], lineno);
      r.mean_length = parse_field(f[6], lineno);
      r.mean_T = parse_field(f[7], lineno);
      report.rows.push_back(r);
    }
    return report;
  }
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("report: invalid JSON: ") + e.what());
  }
  if (!root.contains("rows") || !root.at("rows").is_array()) throw Error("report: missing rows");
  for (const auto& j : root.at("rows")) {
    CoverageRow r;
    r.mu = number_from(j.at("mu"), "mu");
    r.method = method_from(j.at("method").get<std::string>());
    r.L_pct = number_from(j.at("L_pct"), "L_pct");
    r.U_pct = number_from(j.at("U_pct"), "U_pct");
    r.L_se = number_from(j.at("L_se"), "L_se");
    r.U_se = number_from(j.at("U_se"), "U_se");
    r.mean_length = number_from(j.at("mean_length"), "mean_length");
    r.mean_T = number_from(j.at("mean_T"), "mean_T");
    report.rows.push_back(r);
  }
  return report;
}

std::string render_quantile_table(const QuantileTable& table, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out = "delta,mu,statistic";
    for (double l : kQuantileLevels) out += ',' + level_name(l);
    out += '\n';
    for (const auto& r : table.rows) {
      out += (std::isnan(r.delta) ? std::string() : format_number(r.delta)) + ',' + format_number(r.mu) + ',' +
             r.statistic;
      for (double q : r.q) out += ',' + format_number(q);
      out += '\n';
    }
    return out;
  }
  json rows = json::array();
  for (const auto& r : table.rows) {
    json q = json::object();
    for (std::size_t l = 0; l < kQuantileLevels.size(); ++l) q[level_name(kQuantileLevels[l])] = number_json(r.q[l]);
    rows.push_back(json{{"delta", std::isnan(r.delta) ? json(nullptr) : number_json(r.delta)},
                        {"mu", number_json(r.mu)},
                        {"statistic", r.statistic},
                        {"quantiles", q}});
  }
  return json{{"rows", rows}}.dump(2) + '\n';
}

void write_quantile_table(const QuantileTable& table, const std::filesystem::path& path, ReportFormat format) {
  write_text(path, render_quantile_table(table, format));
}

std::string interval_to_json(const IntervalResult& result) {
  const auto& d = result.diagnostics;
  json j{{"lower", exact_json(result.lower)},
         {"upper", exact_json(result.upper)},
         {"method", std::string(method_name(result.method))},
         {"alpha", result.alpha},
         {"diagnostics",
          {{"B", d.B},
           {"grid_points", d.grid_points},
           {"grid_lower", exact_json(d.grid_lower)},
           {"grid_upper", exact_json(d.grid_upper)},
           {"evaluations", d.evaluations},
           {"flags", d.flags}}}};
  return j.dump(2);
}

}  // namespace seqinfer
