// SPDX-License-Identifier: Apache-2.0
#include "seqinfer/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "parallel.hpp"
#include "seqinfer/errors.hpp"
#include "seqinfer/numerics.hpp"

namespace seqinfer {

namespace {

struct Outcome {
  bool failed = false;
  bool lower_miss = false;
  bool upper_miss = false;
  double length = 0.0;
};

double pct(int count, int n) { return n > 0 ? 100.0 * count / n : std::nan(""); }

double pct_se(int count, int n) {
  if (n <= 0) return std::nan("");
  const double p = static_cast<double>(count) / n;
  return 100.0 * std::sqrt(p * (1.0 - p) / n);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

int CoverageReport::total_failures() const {
  int n = 0;
  for (const auto& r : rows) n += r.failures;
  return n;
}

GridSpec grid_for(const StoppedSample& sample, const Scenario& scenario, const GridOverrides& grid) {
  const auto h = scenario.h();
  const double sigma =
      scenario.variance == VarianceMode::KnownUnit ? 1.0 : moment_estimates(sample, h).sigma;
  return GridSpec::around(h(sample.mean), sigma, sample.T, grid.points, grid.width_factor, grid.refine_steps);
}

IntervalResult build_interval(Method method, const StoppedSample& sample, const Scenario& scenario,
                              double alpha, int B, const PopulationSpec& exact_family,
                              const GridOverrides& grid, RandomStream stream) {
  const auto h = scenario.h();
  switch (method) {
    case Method::NormalR0:
      return interval_normal_R0(sample, h, alpha, scenario.variance);
    case Method::NormalR1:
      return interval_normal_R1(sample, scenario.rule, h, alpha, scenario.variance);
    case Method::NormalR:
      return interval_normal_R(sample, scenario.rule, alpha);
    case Method::TR0:
      return interval_t(sample, scenario.rule, h, alpha, RootKind::R0);
    case Method::TR1:
      return interval_t(sample, scenario.rule, h, alpha, RootKind::R1);
    case Method::BootR0:
      return interval_bootstrap(sample, scenario.bootstrap_spec(RootKind::R0), alpha, B, stream);
    case Method::BootR1:
      return interval_bootstrap(sample, scenario.bootstrap_spec(RootKind::R1), alpha, B, stream);
    case Method::Hybrid:
      return interval_hybrid(sample, scenario.root_spec(RootKind::R0), alpha, B,
                             grid_for(sample, scenario, grid), stream);
    case Method::Exact:
      return interval_exact(sample, exact_family.at(0.0), scenario.root_spec(RootKind::R0), alpha, B,
                            grid_for(sample, scenario, grid), stream);
    case Method::WholeLine: {
      IntervalResult out;
      out.lower = -std::numeric_limits<double>::infinity();
      out.upper = std::numeric_limits<double>::infinity();
      out.method = Method::WholeLine;
      out.alpha = alpha;
      return out;
    }
  }
  throw std::invalid_argument("unknown method");
}

CoverageReport run_coverage(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  const Scenario& sc = cfg.scenario;
  const int n_methods = static_cast<int>(cfg.methods.size());
  const int n_workers = std::clamp(jobs, 1, cfg.n_sims);
  std::vector<StoppedSample> samples(static_cast<std::size_t>(n_workers));
  std::vector<Outcome> outcomes(static_cast<std::size_t>(cfg.n_sims) * n_methods);
  std::vector<int> stop_times(static_cast<std::size_t>(cfg.n_sims));

  CoverageReport report;
  for (std::size_t m = 0; m < cfg.mu_list.size(); ++m) {
    const double mu = cfg.mu_list[m];
    const Population pop = cfg.population.at(mu);

    detail::parallel_for(cfg.n_sims, n_workers, [&](int r, int w) {
      StoppedSample& sample = samples[static_cast<std::size_t>(w)];
      const RandomStream replicate(cfg.seed, static_cast<std::uint64_t>(r));
      RandomStream data = replicate;
      run_trial_into(sc.rule, pop, sc.map, data, sample);
      stop_times[static_cast<std::size_t>(r)] = sample.T;

      for (int j = 0; j < n_methods; ++j) {
        const Method method = cfg.methods[static_cast<std::size_t>(j)];
        Outcome& o = outcomes[static_cast<std::size_t>(r) * n_methods + j];
        try {
          // Fresh resampling draws per replicate, so Monte Carlo error in
          // the simulated quantiles averages out over replicates.
          const RandomStream inner =
              replicate.child(1 + static_cast<std::uint64_t>(method)).child(static_cast<std::uint64_t>(m));
          const int B = method == Method::Exact ? cfg.exact_B : cfg.B;
          const IntervalResult res =
              build_interval(method, sample, sc, cfg.alpha, B, cfg.exact_family, cfg.grid, inner);
          o = Outcome{false, res.lower > mu, res.upper < mu, res.upper - res.lower};
        } catch (const NumericError&) {
          o = Outcome{true, false, false, 0.0};
        }
      }
    });

    double sum_T = 0.0;
    for (int t : stop_times) sum_T += t;
    for (int j = 0; j < n_methods; ++j) {
      int valid = 0;
      int lower = 0;
      int upper = 0;
      double length = 0.0;
      for (int r = 0; r < cfg.n_sims; ++r) {
        const Outcome& o = outcomes[static_cast<std::size_t>(r) * n_methods + j];
        if (o.failed) continue;
        ++valid;
        lower += o.lower_miss;
        upper += o.upper_miss;
        length += o.length;
      }
      CoverageRow row;
      row.mu = mu;
      row.method = cfg.methods[static_cast<std::size_t>(j)];
      row.L_pct = pct(lower, valid);
      row.U_pct = pct(upper, valid);
      row.L_se = pct_se(lower, valid);
      row.U_se = pct_se(upper, valid);
      row.mean_length = valid > 0 ? length / valid : std::nan("");
      row.mean_T = sum_T / cfg.n_sims;
      row.n_valid = valid;
      row.failures = cfg.n_sims - valid;
      report.rows.push_back(row);
    }
  }
  return report;
}

QuantileTable run_quantile_table(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  if (cfg.scenario.map.kind() != ObservationMap::Kind::Identity) {
    throw ConfigError("quantile table: needs the identity map");
  }
  if (cfg.population.family != PopulationSpec::Family::Normal) {
    throw ConfigError("quantile table: needs a normal population");
  }
  const Scenario& base = cfg.scenario;
  const bool has_delta = base.rule.g().name() == "smoothed_absolute";
  std::vector<double> deltas = cfg.delta_sweep;
  if (deltas.empty()) deltas.push_back(has_delta ? base.rule.g().delta() : std::nan(""));

  const auto h = base.h();
  constexpr int kStats = 4;
  static const char* const kNames[kStats] = {"R", "R0", "R1", "R1_sigmahat"};
  std::vector<double> values(static_cast<std::size_t>(cfg.n_sims) * kStats);
  const int n_workers = std::clamp(jobs, 1, cfg.n_sims);
  std::vector<StoppedSample> samples(static_cast<std::size_t>(n_workers));

  QuantileTable table;
  for (double delta : deltas) {
    const StoppingRule rule =
        has_delta ? StoppingRule(BoundaryFunction::smoothed_absolute(delta), base.rule.a(), base.rule.n0(),
                                 base.rule.n1(), base.rule.monitoring())
                  : base.rule;
    for (double mu : cfg.mu_list) {
      const Population pop = cfg.population.at(mu);
      detail::parallel_for(cfg.n_sims, n_workers, [&](int r, int w) {
        StoppedSample& s = samples[static_cast<std::size_t>(w)];
        RandomStream data(cfg.seed, static_cast<std::uint64_t>(r));
        run_trial_into(rule, pop, base.map, data, s);
        double* out = values.data() + static_cast<std::size_t>(r) * kStats;
        out[0] = eval_R(s, rule, mu);
        out[1] = eval_R0(s, h, mu, VarianceMode::KnownUnit);
        out[2] = eval_R1(s, rule, h, mu, VarianceMode::KnownUnit);
        try {
          out[3] = eval_R1(s, rule, h, mu, VarianceMode::Estimated);
        } catch (const NumericError&) {
          out[3] = std::nan("");
        }
      });

      for (int k = 0; k < kStats; ++k) {
        std::vector<double> column;
        column.reserve(static_cast<std::size_t>(cfg.n_sims));
        for (int r = 0; r < cfg.n_sims; ++r) {
          const double v = values[static_cast<std::size_t>(r) * kStats + k];
          if (!std::isnan(v)) column.push_back(v);
        }
        QuantileRow row;
        row.delta = delta;
        row.mu = mu;
        row.statistic = kNames[k];
        std::sort(column.begin(), column.end());
        for (std::size_t l = 0; l < kQuantileLevels.size(); ++l) {
          row.q[l] = column.empty() ? std::nan("") : sorted_quantile(column, kQuantileLevels[l] / 100.0);
        }
        table.rows.push_back(row);
      }
    }
  }
  return table;
}

std::vector<double> parse_dataset(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const std::string tok = trim(line);
    if (tok.empty()) continue;
    if (first && tok == "x") {
      first = false;
      continue;
    }
    first = false;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw Error("line " + std::to_string(lineno) + ": not a number: \"" + tok + "\"");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str());
}

IntervalResult interval_for_data(std::span<const double> data, const Scenario& scenario, Method method,
                                 double alpha, int B, std::uint64_t seed) {
  if (data.empty()) throw ConfigError("data: no observations");
  if (!(alpha > 0.0 && alpha < 0.5)) throw ConfigError("alpha must lie in (0, 0.5)");
  if (B < 1) throw ConfigError("B must be >= 1");
  ExperimentConfig check;
  check.scenario = scenario;
  check.methods = {method};
  check.validate();

  const StoppedSample sample = StoppedSample::from_scalars(scenario.map, data);
  StoppingMonitor monitor(scenario.rule);
  int stopped_at = 0;
  for (int i = 0; i < sample.T && stopped_at == 0; ++i)
    if (monitor.observe(sample.observation(i))) stopped_at = i + 1;

  IntervalResult out = build_interval(method, sample, scenario, alpha, B, PopulationSpec{}, GridOverrides{},
                                      RandomStream(seed, 0));
  if (stopped_at != sample.T) out.diagnostics.flags.emplace_back("rule-inconsistent");
  return out;
}

std::vector<TrialSummary> simulate_trials(const Scenario& scenario, const Population& pop, std::uint64_t seed,
                                          int trials) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  std::vector<TrialSummary> out;
  out.reserve(static_cast<std::size_t>(trials));
  StoppedSample s;
  for (int r = 0; r < trials; ++r) {
    RandomStream data(seed, static_cast<std::uint64_t>(r));
    run_trial_into(scenario.rule, pop, scenario.map, data, s);
    const double stat = s.T * scenario.rule.g()(s.mean);
    out.push_back(TrialSummary{s.T, s.mean[0], s.sums[0], s.T < scenario.rule.n0() || stat >= scenario.rule.a()});
  }
  return out;
}

}  // namespace seqinfer
