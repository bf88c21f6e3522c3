// SPDX-License-Identifier: Apache-2.0
#include "seqinfer/seqinfer.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "seqinfer/config.hpp"
#include "seqinfer/errors.hpp"
#include "seqinfer/harness.hpp"
#include "seqinfer/report.hpp"

struct seqinfer_config {
  seqinfer::ExperimentConfig cfg;
};

struct seqinfer_coverage {
  seqinfer::CoverageReport report;
  std::vector<std::string> method_names;
};

struct seqinfer_quantiles {
  seqinfer::QuantileTable table;
};

namespace {

thread_local std::string last_error;

seqinfer_status fail(seqinfer_status code, const std::string& message) {
  last_error = message;
  return code;
}

// Runs fn, mapping exceptions to status codes.
template <class Fn>
seqinfer_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return SEQINFER_OK;
  } catch (const seqinfer::ConfigError& e) {
    return fail(SEQINFER_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SEQINFER_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(SEQINFER_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(SEQINFER_ERR_RUNTIME, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

seqinfer::ReportFormat to_format(seqinfer_format f) {
  switch (f) {
    case SEQINFER_FORMAT_CSV:
      return seqinfer::ReportFormat::Csv;
    case SEQINFER_FORMAT_JSON:
      return seqinfer::ReportFormat::Json;
  }
  throw seqinfer::ConfigError("unknown report format");
}

#define SEQINFER_REQUIRE(cond, what) \
  if (!(cond)) return fail(SEQINFER_ERR_CONFIG, what)

}  // namespace

extern "C" {

const char* seqinfer_last_error(void) { return last_error.c_str(); }

const char* seqinfer_version(void) { return "0.1.0"; }

void seqinfer_string_free(char* s) { std::free(s); }

void seqinfer_doubles_free(double* values) { std::free(values); }

seqinfer_status seqinfer_config_from_file(const char* path, seqinfer_config** out) {
  SEQINFER_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new seqinfer_config{seqinfer::load_config(path)}; });
}

seqinfer_status seqinfer_config_from_json(const char* json, seqinfer_config** out) {
  SEQINFER_REQUIRE(json && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new seqinfer_config{seqinfer::parse_config(json)}; });
}

seqinfer_status seqinfer_config_set_seed(seqinfer_config* config, uint64_t seed) {
  SEQINFER_REQUIRE(config, "null config");
  config->cfg.seed = seed;
  last_error.clear();
  return SEQINFER_OK;
}

void seqinfer_config_free(seqinfer_config* config) { delete config; }

seqinfer_status seqinfer_run_coverage(const seqinfer_config* config, int jobs, seqinfer_coverage** out) {
  SEQINFER_REQUIRE(config && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto result = std::make_unique<seqinfer_coverage>();
    result->report = seqinfer::run_coverage(config->cfg, jobs);
    for (const auto& row : result->report.rows) result->method_names.emplace_back(seqinfer::method_name(row.method));
    *out = result.release();
  });
}

size_t seqinfer_coverage_rows(const seqinfer_coverage* report) { return report ? report->report.rows.size() : 0; }

seqinfer_status seqinfer_coverage_row_at(const seqinfer_coverage* report, size_t index, seqinfer_coverage_row* out) {
  SEQINFER_REQUIRE(report && out, "null argument");
  SEQINFER_REQUIRE(index < report->report.rows.size(), "row index out of range");
  const auto& r = report->report.rows[index];
  *out = seqinfer_coverage_row{r.mu,   report->method_names[index].c_str(),
                               r.L_pct, r.U_pct,
                               r.L_se,  r.U_se,
                               r.mean_length, r.mean_T,
                               r.n_valid, r.failures};
  last_error.clear();
  return SEQINFER_OK;
}

seqinfer_status seqinfer_coverage_render(const seqinfer_coverage* report, seqinfer_format format, char** out) {
  SEQINFER_REQUIRE(report && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = copy_string(seqinfer::render_report(report->report, to_format(format))); });
}

seqinfer_status seqinfer_coverage_write(const seqinfer_coverage* report, const char* path, seqinfer_format format) {
  SEQINFER_REQUIRE(report && path, "null argument");
  return guarded([&] { seqinfer::write_report(report->report, path, to_format(format)); });
}

void seqinfer_coverage_free(seqinfer_coverage* report) { delete report; }

seqinfer_status seqinfer_run_quantiles(const seqinfer_config* config, int jobs, seqinfer_quantiles** out) {
  SEQINFER_REQUIRE(config && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new seqinfer_quantiles{seqinfer::run_quantile_table(config->cfg, jobs)}; });
}

seqinfer_status seqinfer_quantiles_render(const seqinfer_quantiles* table, seqinfer_format format, char** out) {
  SEQINFER_REQUIRE(table && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = copy_string(seqinfer::render_quantile_table(table->table, to_format(format))); });
}

seqinfer_status seqinfer_quantiles_write(const seqinfer_quantiles* table, const char* path, seqinfer_format format) {
  SEQINFER_REQUIRE(table && path, "null argument");
  return guarded([&] { seqinfer::write_quantile_table(table->table, path, to_format(format)); });
}

void seqinfer_quantiles_free(seqinfer_quantiles* table) { delete table; }

seqinfer_status seqinfer_simulate(const seqinfer_config* config, uint64_t seed, int trials, char** out) {
  SEQINFER_REQUIRE(config && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    const auto& cfg = config->cfg;
    std::string text = "mu,trial,T,mean,sum,crossed\n";
    for (double mu : cfg.mu_list) {
      const auto trials_out = seqinfer::simulate_trials(cfg.scenario, cfg.population.at(mu), seed, trials);
      for (std::size_t i = 0; i < trials_out.size(); ++i) {
        const auto& t = trials_out[i];
        text += seqinfer::format_number(mu) + ',' + std::to_string(i) + ',' + std::to_string(t.T) + ',' +
                seqinfer::format_number(t.mean) + ',' + seqinfer::format_number(t.sum) + ',' +
                (t.hit_boundary ? "1" : "0") + '\n';
      }
    }
    *out = copy_string(text);
  });
}

seqinfer_status seqinfer_load_dataset(const char* path, double** values, size_t* count) {
  SEQINFER_REQUIRE(path && values && count, "null argument");
  *values = nullptr;
  *count = 0;
  try {
    const auto data = seqinfer::load_dataset(path);
    auto* buf = static_cast<double*>(std::malloc(std::max<std::size_t>(data.size(), 1) * sizeof(double)));
    if (!buf) return fail(SEQINFER_ERR_RUNTIME, "out of memory");
    std::copy(data.begin(), data.end(), buf);
    *values = buf;
    *count = data.size();
    last_error.clear();
    return SEQINFER_OK;
  } catch (const std::exception& e) {
    // Unreadable or malformed input data is a usage error.
    return fail(SEQINFER_ERR_CONFIG, e.what());
  }
}

seqinfer_status seqinfer_interval(const double* data, size_t count, const char* rule, const char* method,
                                  double alpha, int B, uint64_t seed, char** out_json) {
  SEQINFER_REQUIRE((data || count == 0) && rule && method && out_json, "null argument");
  *out_json = nullptr;
  return guarded([&] {
    const auto m = seqinfer::parse_method(method);
    if (!m) throw seqinfer::ConfigError(std::string("unknown method \"") + method + "\"");
    const auto scenario = seqinfer::resolve_scenario(rule);
    const auto result =
        seqinfer::interval_for_data(std::span<const double>(data, count), scenario, *m, alpha, B, seed);
    *out_json = copy_string(seqinfer::interval_to_json(result));
  });
}

}  // extern "C"
