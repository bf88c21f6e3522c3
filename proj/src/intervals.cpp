// SPDX-License-Identifier: Apache-2.0
#include "seqinfer/intervals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "seqinfer/numerics.hpp"

namespace seqinfer {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 10> kMethodNames{{
    {Method::Exact, "exact"},
    {Method::Hybrid, "hybrid"},
    {Method::NormalR0, "normal_r0"},
    {Method::BootR0, "boot_r0"},
    {Method::NormalR1, "normal_r1"},
    {Method::BootR1, "boot_r1"},
    {Method::NormalR, "normal_r"},
    {Method::TR0, "t_r0"},
    {Method::TR1, "t_r1"},
    {Method::WholeLine, "whole_line"},
}};

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw std::domain_error("alpha must lie in (0, 0.5]");
}

// z_q for q = 1 - alpha and alpha; alpha = 0.5 gives exactly zero.
std::pair<double, double> normal_pair(double alpha) {
  if (alpha == 0.5) return {0.0, 0.0};
  return {normal_quantile(alpha), normal_quantile(1.0 - alpha)};
}

IntervalResult invert(const AffineRoot& root, std::pair<double, double> q, Method m, double alpha) {
  IntervalResult out;
  out.lower = root.invert(q.second);
  out.upper = root.invert(q.first);
  out.method = m;
  out.alpha = alpha;
  return out;
}

double grid_sigma(const StoppedSample& sample, const RootSpec& spec) {
  if (spec.variance == VarianceMode::KnownUnit) return 1.0;
  return moment_estimates(sample, spec.h).sigma;
}

IntervalResult grid_interval(const StoppedSample& sample, RootSimulator& sim, const RootSpec& spec,
                             double alpha, std::optional<GridSpec> grid, Method method) {
  check_alpha(alpha);
  if (alpha == 0.5) throw std::domain_error("grid scans need alpha < 0.5");
  const AffineRoot data_root = affine_root(spec.kind, sample, spec.rule, spec.h, spec.variance);
  const GridSpec g = grid ? *grid : GridSpec::around(data_root.center, grid_sigma(sample, spec), sample.T);
  g.validate();

  const auto scan = scan_confidence_set(
      g, [&](double theta) { return data_root.value(theta); },
      [&](double theta) { return sim.quantiles(theta, alpha); });

  IntervalResult out;
  out.method = method;
  out.alpha = alpha;
  auto& diag = out.diagnostics;
  diag.B = sim.B();
  diag.grid_points = g.points;
  diag.grid_lower = g.node(0);
  diag.grid_upper = g.node(g.points - 1);
  diag.evaluations = scan.evaluations;
  if (scan.empty) {
    out.lower = out.upper = data_root.center;
    diag.flags.emplace_back("empty-acceptance");
    return out;
  }
  out.lower = scan.lower;
  out.upper = scan.upper;
  if (!scan.contiguous) diag.flags.emplace_back("non-interval");
  if (scan.lower_at_edge || scan.upper_at_edge) diag.flags.emplace_back("grid-hull");
  return out;
}

}  // namespace

std::string_view method_name(Method m) {
  for (const auto& [k, v] : kMethodNames)
    if (k == m) return v;
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (const auto& [k, v] : kMethodNames)
    if (v == name) return k;
  return std::nullopt;
}

bool IntervalDiagnostics::has_flag(std::string_view f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

GridSpec GridSpec::around(double center, double sigma_hat, int T, int points, double width_factor,
                          int refine_steps) {
  return GridSpec{center, width_factor * std::max(sigma_hat, 1.0) / std::sqrt(static_cast<double>(T)), points,
                  refine_steps};
}

void GridSpec::validate() const {
  if (points < 3 || points % 2 == 0) throw std::invalid_argument("grid: points must be odd and >= 3");
  if (!(half_width > 0.0)) throw std::invalid_argument("grid: half width must be > 0");
  if (refine_steps < 0) throw std::invalid_argument("grid: refine steps must be >= 0");
}

ScanResult scan_confidence_set(const GridSpec& grid, const std::function<double(double)>& root,
                               const std::function<std::pair<double, double>(double)>& quantiles) {
  ScanResult out;
  auto accept = [&](double theta) {
    ++out.evaluations;
    const auto [lo, hi] = quantiles(theta);
    const double r = root(theta);
    return lo < r && r < hi;
  };

  std::vector<char> accepted(static_cast<std::size_t>(grid.points));
  for (int k = 0; k < grid.points; ++k) accepted[static_cast<std::size_t>(k)] = accept(grid.node(k));

  const auto first = std::find(accepted.begin(), accepted.end(), 1);
  if (first == accepted.end()) return out;
  const auto last = std::find(accepted.rbegin(), accepted.rend(), 1);
  const int lo_idx = static_cast<int>(first - accepted.begin());
  const int hi_idx = grid.points - 1 - static_cast<int>(last - accepted.rbegin());
  out.empty = false;
  out.contiguous = std::all_of(first, last.base(), [](char c) { return c == 1; });

  if (lo_idx == 0) {
    out.lower = grid.node(0);
    out.lower_at_edge = true;
  } else {
    double rejected = grid.node(lo_idx - 1);
    double inside = grid.node(lo_idx);
    for (int s = 0; s < grid.refine_steps; ++s) {
      const double mid = 0.5 * (rejected + inside);
      (accept(mid) ? inside : rejected) = mid;
    }
    out.lower = inside;
  }

  if (hi_idx == grid.points - 1) {
    out.upper = grid.node(grid.points - 1);
    out.upper_at_edge = true;
  } else {
    double inside = grid.node(hi_idx);
    double rejected = grid.node(hi_idx + 1);
    for (int s = 0; s < grid.refine_steps; ++s) {
      const double mid = 0.5 * (rejected + inside);
      (accept(mid) ? inside : rejected) = mid;
    }
    out.upper = inside;
  }
  return out;
}

IntervalResult interval_normal_R0(const StoppedSample& sample, const SmoothFunctional& h, double alpha,
                                  VarianceMode mode) {
  check_alpha(alpha);
  static const StoppingRule kUnusedRule = presets::repeated_significance_test();
  return invert(affine_root(RootKind::R0, sample, kUnusedRule, h, mode), normal_pair(alpha), Method::NormalR0,
                alpha);
}

IntervalResult interval_normal_R1(const StoppedSample& sample, const StoppingRule& rule,
                                  const SmoothFunctional& h, double alpha, VarianceMode mode) {
  check_alpha(alpha);
  return invert(affine_root(RootKind::R1, sample, rule, h, mode), normal_pair(alpha), Method::NormalR1, alpha);
}

IntervalResult interval_normal_R(const StoppedSample& sample, const StoppingRule& rule, double alpha) {
  check_alpha(alpha);
  return invert(affine_root(RootKind::RRenorm, sample, rule, SmoothFunctional::coordinate(1),
                            VarianceMode::KnownUnit),
                normal_pair(alpha), Method::NormalR, alpha);
}

IntervalResult interval_t(const StoppedSample& sample, const StoppingRule& rule, const SmoothFunctional& h,
                          double alpha, RootKind kind) {
  check_alpha(alpha);
  if (kind == RootKind::RRenorm) throw std::invalid_argument("interval_t: root must be R0 or R1");
  std::pair<double, double> q{0.0, 0.0};
  if (alpha < 0.5) q = {t_quantile(alpha, sample.T), t_quantile(1.0 - alpha, sample.T)};
  return invert(affine_root(kind, sample, rule, h, VarianceMode::Estimated), q,
                kind == RootKind::R0 ? Method::TR0 : Method::TR1, alpha);
}

IntervalResult interval_bootstrap(const StoppedSample& sample, const RootSpec& spec, double alpha, int B,
                                  RandomStream stream) {
  check_alpha(alpha);
  if (alpha == 0.5) throw std::domain_error("bootstrap interval needs alpha < 0.5");
  const AffineRoot data_root = affine_root(spec.kind, sample, spec.rule, spec.h, spec.variance);
  RootSimulator sim(ResamplingFamily::bootstrap(sample.scalars), spec, B, stream);
  const auto u = sim.quantiles(0.0, alpha);
  IntervalResult out = invert(data_root, u, spec.kind == RootKind::R0 ? Method::BootR0 : Method::BootR1, alpha);
  out.diagnostics.B = B;
  return out;
}

IntervalResult interval_hybrid(const StoppedSample& sample, const RootSpec& spec, double alpha, int B,
                               std::optional<GridSpec> grid, RandomStream stream) {
  if (spec.variance != VarianceMode::KnownUnit) {
    throw std::invalid_argument("hybrid interval: only defined for known unit variance");
  }
  RootSimulator sim(
      ResamplingFamily::hybrid_shift(sample.scalars, ResamplingFamily::ResidualScale::UnitVariance), spec, B,
      stream);
  return grid_interval(sample, sim, spec, alpha, grid, Method::Hybrid);
}

IntervalResult interval_exact(const StoppedSample& sample, const Population& family_base, const RootSpec& spec,
                              double alpha, int B, std::optional<GridSpec> grid, RandomStream stream) {
  RootSimulator sim(ResamplingFamily::parametric(family_base), spec, B, stream);
  return grid_interval(sample, sim, spec, alpha, grid, Method::Exact);
}

IntervalResult interval_exact(const StoppedSample& sample, RootSimulator& simulator, const RootSpec& spec,
                              double alpha, std::optional<GridSpec> grid) {
  return grid_interval(sample, simulator, spec, alpha, grid, Method::Exact);
}

}  // namespace seqinfer
