// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "seqinfer/intervals.hpp"
#include "seqinfer/resampling.hpp"

namespace seqinfer {

/// Sampling law of the simulated data, as a function of the true mean.
struct PopulationSpec {
  enum class Family { Normal, Mixture };
  Family family = Family::Normal;
  double sigma = 1.0;

  Population at(double mu) const;
};

/// Stopping rule plus how observations are lifted and which variance
/// treatment the roots use. The target is always the mean, h = first coordinate.
struct Scenario {
  StoppingRule rule = presets::repeated_significance_test();
  ObservationMap map = ObservationMap::identity();
  VarianceMode variance = VarianceMode::KnownUnit;
  /// Roots of the bootstrap methods, studentized by default.
  VarianceMode bootstrap_variance = VarianceMode::Estimated;

  SmoothFunctional h() const { return SmoothFunctional::coordinate(map.dim(), 0); }
  RootSpec root_spec(RootKind kind) const { return RootSpec{kind, rule, map, h(), variance}; }
  RootSpec bootstrap_spec(RootKind kind) const { return RootSpec{kind, rule, map, h(), bootstrap_variance}; }
};

struct GridOverrides {
  int points = 161;
  double width_factor = 8.0;
  int refine_steps = 20;
};

struct ExperimentConfig {
  Scenario scenario;
  PopulationSpec population;
  PopulationSpec exact_family;  ///< family assumed by the exact method
  std::vector<double> mu_list;
  std::vector<Method> methods;
  double alpha = 0.05;
  int n_sims = 10000;
  int B = 1000;
  int exact_B = 10000;
  std::uint64_t seed = 1;
  GridOverrides grid;
  /// Smoothed-absolute boundary only: one quantile table block per delta.
  std::vector<double> delta_sweep;

  /// Throws ConfigError.
  void validate() const;
};

/// Desk-scale preset: n_sims = 2000, B = exact_B = 500, 61 grid points.
void apply_fast_profile(ExperimentConfig& config);

/// Parses the JSON config. Unknown fields are rejected. Throws ConfigError.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// A scenario from a preset name ("rst", "studentized_rst",
/// "smoothed_absolute[:delta]") or a JSON file holding a scenario object.
Scenario resolve_scenario(std::string_view name_or_path);
Scenario parse_scenario(std::string_view json_text);

}  // namespace seqinfer
