// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqinfer/pivots.hpp"
#include "seqinfer/resampling.hpp"

namespace seqinfer {

enum class Method {
  Exact,
  Hybrid,
  NormalR0,
  BootR0,
  NormalR1,
  BootR1,
  NormalR,
  TR0,
  TR1,
  WholeLine,  ///< (-inf, inf); a diagnostic stub for the harness
};

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

struct IntervalDiagnostics {
  int B = 0;
  int grid_points = 0;
  double grid_lower = 0.0;
  double grid_upper = 0.0;
  int evaluations = 0;
  std::vector<std::string> flags;

  bool has_flag(std::string_view f) const;
};

struct IntervalResult {
  double lower = 0.0;
  double upper = 0.0;
  Method method = Method::NormalR0;
  double alpha = 0.05;
  IntervalDiagnostics diagnostics;
};

/// Grid of candidate parameter values for the hybrid and exact scans.
struct GridSpec {
  double center = 0.0;
  double half_width = 1.0;
  int points = 161;      ///< odd, so the center is a node
  int refine_steps = 20; ///< bisections of each boundary cell

  /// center h(Xbar_T), half width width_factor * max(sigma_hat, 1) / sqrt(T).
  static GridSpec around(double center, double sigma_hat, int T, int points = 161,
                         double width_factor = 8.0, int refine_steps = 20);

  double node(int k) const { return center - half_width + 2.0 * half_width * k / (points - 1); }
  void validate() const;
};

struct ScanResult {
  double lower = 0.0;
  double upper = 0.0;
  bool empty = true;
  bool contiguous = true;
  bool lower_at_edge = false;
  bool upper_at_edge = false;
  int evaluations = 0;
};

/// Scans {theta : q_lo(theta) < root(theta) < q_hi(theta)} over the grid and
/// bisects the two boundary cells. Ties count as rejection.
ScanResult scan_confidence_set(const GridSpec& grid, const std::function<double(double)>& root,
                               const std::function<std::pair<double, double>(double)>& quantiles);

IntervalResult interval_normal_R0(const StoppedSample& sample, const SmoothFunctional& h, double alpha,
                                  VarianceMode mode);
IntervalResult interval_normal_R1(const StoppedSample& sample, const StoppingRule& rule,
                                  const SmoothFunctional& h, double alpha, VarianceMode mode);
IntervalResult interval_normal_R(const StoppedSample& sample, const StoppingRule& rule, double alpha);
/// t quantiles with T degrees of freedom; estimated variance. kind is R0 or R1.
IntervalResult interval_t(const StoppedSample& sample, const StoppingRule& rule, const SmoothFunctional& h,
                          double alpha, RootKind kind);

IntervalResult interval_bootstrap(const StoppedSample& sample, const RootSpec& spec, double alpha, int B,
                                  RandomStream stream);

IntervalResult interval_hybrid(const StoppedSample& sample, const RootSpec& spec, double alpha, int B,
                               std::optional<GridSpec> grid, RandomStream stream);

/// Exact method under the location family generated by `family_base`.
IntervalResult interval_exact(const StoppedSample& sample, const Population& family_base, const RootSpec& spec,
                              double alpha, int B, std::optional<GridSpec> grid, RandomStream stream);

/// Exact method with a caller-owned simulator, typically backed by a bank
/// shared across many trials.
IntervalResult interval_exact(const StoppedSample& sample, RootSimulator& simulator, const RootSpec& spec,
                              double alpha, std::optional<GridSpec> grid);

}  // namespace seqinfer
