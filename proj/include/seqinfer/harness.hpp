// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "seqinfer/config.hpp"

namespace seqinfer {

struct CoverageRow {
  double mu = 0.0;
  Method method = Method::NormalR0;
  double L_pct = 0.0;  ///< % of replicates with lower > mu
  double U_pct = 0.0;  ///< % of replicates with upper < mu
  double L_se = 0.0;   ///< sqrt(p (1 - p) / n) in percentage points
  double U_se = 0.0;
  double mean_length = 0.0;
  double mean_T = 0.0;
  int n_valid = 0;     ///< replicates where the method produced an interval
  int failures = 0;
};

struct CoverageReport {
  std::vector<CoverageRow> rows;
  int total_failures() const;
};

/// Simulates n_sims stopped trials per mu and scores every method. Replicate r
/// draws its data from stream (seed, r); results do not depend on `jobs`.
CoverageReport run_coverage(const ExperimentConfig& config, int jobs = 1);

/// Interval for one stopped sample by method tag. Resampling methods draw
/// from `stream`; the exact method assumes `exact_family`.
IntervalResult build_interval(Method method, const StoppedSample& sample, const Scenario& scenario,
                              double alpha, int B, const PopulationSpec& exact_family,
                              const GridOverrides& grid, RandomStream stream);

/// Grid for the hybrid and exact scans of one sample.
GridSpec grid_for(const StoppedSample& sample, const Scenario& scenario, const GridOverrides& grid);

inline constexpr std::array<double, 9> kQuantileLevels{2.5, 5, 10, 20, 50, 80, 90, 95, 97.5};

struct QuantileRow {
  double delta = std::numeric_limits<double>::quiet_NaN();  ///< NaN unless the boundary has one
  double mu = 0.0;
  std::string statistic;  ///< R, R0, R1 or R1_sigmahat
  std::array<double, kQuantileLevels.size()> q{};
};

struct QuantileTable {
  std::vector<QuantileRow> rows;
};

/// Empirical quantiles of R(mu), R0(mu), R1(mu) and R1 with sigma-hat over
/// n_sims trials, per mu and per delta of the sweep. Needs the identity map
/// and a normal population.
QuantileTable run_quantile_table(const ExperimentConfig& config, int jobs = 1);

/// One value per line, or a single-column CSV with header "x". Blank lines
/// are skipped. Throws Error naming the offending line.
std::vector<double> load_dataset(const std::filesystem::path& path);
std::vector<double> parse_dataset(const std::string& text);

/// Interval for a list of scalars treated as the whole stopped sample. Adds
/// the flag "rule-inconsistent" when the rule would not stop exactly at the
/// last observation. Resampling draws come from stream (seed, 0).
IntervalResult interval_for_data(std::span<const double> data, const Scenario& scenario, Method method,
                                 double alpha, int B, std::uint64_t seed);

/// Summary of one simulated stopped trial, for the CLI.
struct TrialSummary {
  int T = 0;
  double mean = 0.0;
  double sum = 0.0;
  bool hit_boundary = false;  ///< stopped before n0 or crossed exactly at n0
};

std::vector<TrialSummary> simulate_trials(const Scenario& scenario, const Population& pop,
                                          std::uint64_t seed, int trials);

}  // namespace seqinfer
