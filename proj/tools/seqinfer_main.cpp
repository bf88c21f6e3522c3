// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Talks to the library through the C API only.
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "seqinfer/seqinfer.h"

namespace {

struct ConfigDeleter {
  void operator()(seqinfer_config* c) const { seqinfer_config_free(c); }
};
struct CoverageDeleter {
  void operator()(seqinfer_coverage* c) const { seqinfer_coverage_free(c); }
};
struct QuantilesDeleter {
  void operator()(seqinfer_quantiles* q) const { seqinfer_quantiles_free(q); }
};
struct StringDeleter {
  void operator()(char* s) const { seqinfer_string_free(s); }
};
struct DoublesDeleter {
  void operator()(double* d) const { seqinfer_doubles_free(d); }
};

using ConfigPtr = std::unique_ptr<seqinfer_config, ConfigDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int report_error(seqinfer_status status) {
  std::fprintf(stderr, "seqinfer: %s\n", seqinfer_last_error());
  return static_cast<int>(status);
}

int default_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

const std::map<std::string, seqinfer_format> kFormats{{"csv", SEQINFER_FORMAT_CSV}, {"json", SEQINFER_FORMAT_JSON}};

int load(const std::string& path, std::optional<std::uint64_t> seed, ConfigPtr& out) {
  seqinfer_config* raw = nullptr;
  if (auto s = seqinfer_config_from_file(path.c_str(), &raw); s != SEQINFER_OK) return report_error(s);
  out.reset(raw);
  if (seed) seqinfer_config_set_seed(out.get(), *seed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Confidence intervals after sequential stopping"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(seqinfer_version()));

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  int jobs = default_jobs();
  std::optional<std::uint64_t> seed_override;

  auto* simulate = app.add_subcommand("simulate", "Print stopped-sample summaries");
  std::uint64_t sim_seed = 1;
  int trials = 10;
  simulate->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", sim_seed, "Master seed");
  simulate->add_option("--trials", trials, "Trials per mu")->check(CLI::PositiveNumber);

  auto* interval = app.add_subcommand("interval", "Confidence interval for one stopped sample");
  std::string data_path;
  std::string rule = "rst";
  std::string method = "normal_r1";
  double alpha = 0.05;
  int B = 1000;
  std::uint64_t int_seed = 1;
  interval->add_option("--data", data_path, "Observations, one per line or CSV column x")->required();
  interval->add_option("--rule", rule, "Preset (rst, studentized_rst, smoothed_absolute[:delta]) or scenario JSON");
  interval->add_option("--method", method, "Method tag");
  interval->add_option("--alpha", alpha, "Error per side");
  interval->add_option("--bootstrap", B, "Resamples for bootstrap, hybrid and exact");
  interval->add_option("--seed", int_seed, "Master seed");

  auto* quantiles = app.add_subcommand("quantiles", "Quantile table of the roots");
  quantiles->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  quantiles->add_option("--out", out_path, "Output path")->required();
  quantiles->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  quantiles->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  quantiles->add_option("--seed", seed_override, "Override the config seed");

  auto* coverage = app.add_subcommand("coverage", "Coverage errors of interval methods");
  coverage->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  coverage->add_option("--out", out_path, "Output path")->required();
  coverage->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  coverage->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  coverage->add_option("--seed", seed_override, "Override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : SEQINFER_ERR_CONFIG;
  }

  if (simulate->parsed()) {
    ConfigPtr cfg;
    if (int rc = load(config_path, std::nullopt, cfg)) return rc;
    char* text = nullptr;
    if (auto s = seqinfer_simulate(cfg.get(), sim_seed, trials, &text); s != SEQINFER_OK) return report_error(s);
    StringPtr owned(text);
    std::fputs(owned.get(), stdout);
    return 0;
  }

  if (interval->parsed()) {
    double* values = nullptr;
    std::size_t count = 0;
    if (auto s = seqinfer_load_dataset(data_path.c_str(), &values, &count); s != SEQINFER_OK) {
      return report_error(s);
    }
    std::unique_ptr<double, DoublesDeleter> owned_values(values);
    char* json = nullptr;
    if (auto s = seqinfer_interval(values, count, rule.c_str(), method.c_str(), alpha, B, int_seed, &json);
        s != SEQINFER_OK) {
      return report_error(s);
    }
    StringPtr owned(json);
    std::printf("%s\n", owned.get());
    return 0;
  }

  const seqinfer_format fmt = kFormats.at(format);
  ConfigPtr cfg;
  if (int rc = load(config_path, seed_override, cfg)) return rc;

  if (quantiles->parsed()) {
    seqinfer_quantiles* raw = nullptr;
    if (auto s = seqinfer_run_quantiles(cfg.get(), jobs, &raw); s != SEQINFER_OK) return report_error(s);
    std::unique_ptr<seqinfer_quantiles, QuantilesDeleter> table(raw);
    if (auto s = seqinfer_quantiles_write(table.get(), out_path.c_str(), fmt); s != SEQINFER_OK) {
      return report_error(s);
    }
    return 0;
  }

  seqinfer_coverage* raw = nullptr;
  if (auto s = seqinfer_run_coverage(cfg.get(), jobs, &raw); s != SEQINFER_OK) return report_error(s);
  std::unique_ptr<seqinfer_coverage, CoverageDeleter> report(raw);
  for (std::size_t i = 0; i < seqinfer_coverage_rows(report.get()); ++i) {
    seqinfer_coverage_row row{};
    seqinfer_coverage_row_at(report.get(), i, &row);
    if (row.failures > 0) {
      std::fprintf(stderr, "seqinfer: mu=%g %s: %d replicate(s) failed and were excluded\n", row.mu, row.method,
                   row.failures);
    }
  }
  if (auto s = seqinfer_coverage_write(report.get(), out_path.c_str(), fmt); s != SEQINFER_OK) {
    return report_error(s);
  }
  return 0;
}
