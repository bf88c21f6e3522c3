// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "seqinfer/sampling.hpp"

namespace seqinfer {

inline constexpr int kMaxDim = 8;

/// Boundary statistic g applied to S_n / n. Built-ins are evaluated without
/// indirection; custom functions go through std::function.
class BoundaryFunction {
 public:
  using Fn = std::function<double(std::span<const double>)>;
  using GradFn = std::function<void(std::span<const double>, std::span<double>)>;

  /// g(x) = x^2 / 2.
  static BoundaryFunction quadratic();
  /// g(x) = (delta^2 + x^2) / (2 delta) for |x| <= delta, |x| otherwise.
  static BoundaryFunction smoothed_absolute(double delta);
  /// g(eta, m2) = eta^2 / (2 (m2 - eta^2)) for m2 >= eta^2, 0 otherwise.
  /// Applied to the running means of (x, x^2) it gives n g = S_n^2 / (2 n sigma_n^2).
  static BoundaryFunction studentized();
  static BoundaryFunction custom(std::string name, int dim, Fn fn, GradFn grad = {});

  double operator()(std::span<const double> x) const;
  /// Analytic gradient when available, central differences otherwise.
  void gradient(std::span<const double> x, std::span<double> out) const;
  bool has_analytic_gradient() const { return kind_ != Kind::Custom || static_cast<bool>(grad_); }

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  double delta() const { return delta_; }

 private:
  enum class Kind { Quadratic, SmoothedAbsolute, Studentized, Custom };
  BoundaryFunction(Kind kind, std::string name, int dim) : kind_(kind), name_(std::move(name)), dim_(dim) {}

  Kind kind_;
  std::string name_;
  int dim_;
  double delta_ = 0.0;
  Fn fn_;
  GradFn grad_;
};

/// When the boundary is first watched.
enum class Monitoring {
  /// T = inf{n >= n1 : n g(S_n/n) >= a} ∧ n0.
  FromMinimum,
  /// T = min{n0, max(t_a, n1)} with t_a = inf{n >= 1 : n g(S_n/n) >= a}.
  FirstPassage,
};

class StoppingRule {
 public:
  StoppingRule(BoundaryFunction g, double a, int n0, int n1,
               Monitoring monitoring = Monitoring::FromMinimum);

  const BoundaryFunction& g() const { return g_; }
  double a() const { return a_; }
  int n0() const { return n0_; }
  int n1() const { return n1_; }
  int dim() const { return g_.dim(); }
  Monitoring monitoring() const { return monitoring_; }
  double eps0() const { return a_ / n0_; }
  double eps1() const { return a_ / n1_; }

 private:
  BoundaryFunction g_;
  double a_;
  int n0_;
  int n1_;
  Monitoring monitoring_;
};

namespace presets {
/// |S_n| >= 3 sqrt(n), 15 <= n <= 75 (g = x^2/2, a = 4.5).
StoppingRule repeated_significance_test();
/// |S_n| / sigma_n >= 3 sqrt(n), 15 <= n <= 75, on observations lifted to (x, x^2).
StoppingRule studentized_repeated_significance_test();
/// Smoothed-absolute boundary with a = 9, n0 = 72, n1 = 1.
StoppingRule smoothed_absolute_test(double delta);
}  // namespace presets

/// Neumaier-compensated running sum, so S_n is correctly rounded for the
/// lengths used here and exact boundary ties are not lost to drift.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    comp += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

/// Incremental evaluation of a stopping rule. Feed one lifted observation at a
/// time; `observe` returns true once sampling must stop.
class StoppingMonitor {
 public:
  explicit StoppingMonitor(const StoppingRule& rule) : rule_(&rule) {}

  bool observe(std::span<const double> x);
  void reset();

  int n() const { return n_; }
  double sum(int i) const { return sums_[static_cast<std::size_t>(i)].value(); }

 private:
  const StoppingRule* rule_;
  std::array<CompensatedSum, kMaxDim> sums_{};
  std::array<double, kMaxDim> mean_{};
  int n_ = 0;
  bool crossed_ = false;
};

/// Stopping time on a sequence supplied on demand; `next` writes the next
/// d-vector into its argument. Consumes exactly T elements, T <= n0.
template <class Next>
  requires std::invocable<Next&, std::span<double>>
int stopping_time_of(const StoppingRule& rule, Next&& next) {
  StoppingMonitor monitor(rule);
  std::array<double, kMaxDim> x{};
  std::span<double> view(x.data(), static_cast<std::size_t>(rule.dim()));
  for (;;) {
    next(view);
    if (monitor.observe(view)) return monitor.n();
  }
}

/// Finite-sequence convenience; throws std::invalid_argument if the sequence
/// runs out before the rule stops.
int stopping_time_of(const StoppingRule& rule, const std::vector<std::vector<double>>& xs);

/// The randomly stopped sample (X_1, ..., X_T): raw scalars plus their lifted
/// d-vectors stored row-major.
struct StoppedSample {
  int T = 0;
  int dim = 1;
  std::vector<double> scalars;
  std::vector<double> obs;
  std::vector<double> sums;
  std::vector<double> mean;
  std::vector<CompensatedSum> accumulators;

  std::span<const double> observation(int i) const {
    return {obs.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
  }

  void clear(int d);
  void push(double scalar, std::span<const double> lifted);
  /// Fills `mean` from `sums`.
  void finish();

  /// Treats the whole list as the stopped sample.
  static StoppedSample from_scalars(const ObservationMap& map, std::span<const double> xs);
};

StoppedSample run_trial(const StoppingRule& rule, const Population& pop,
                        const ObservationMap& map, RandomStream& stream);

/// Buffer-reusing variant of run_trial.
void run_trial_into(const StoppingRule& rule, const Population& pop, const ObservationMap& map,
                    RandomStream& stream, StoppedSample& out);

/// Limit of a/T: max{eps0, min(g(mu), eps1)}.
double kappa(const StoppingRule& rule, std::span<const double> mu);

}  // namespace seqinfer
