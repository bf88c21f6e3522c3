// SPDX-License-Identifier: Apache-2.0
#include "seqinfer/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "seqinfer/differentiation.hpp"

namespace seqinfer {

BoundaryFunction BoundaryFunction::quadratic() {
  return BoundaryFunction(Kind::Quadratic, "quadratic", 1);
}

BoundaryFunction BoundaryFunction::smoothed_absolute(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("smoothed_absolute: delta must be > 0");
  BoundaryFunction g(Kind::SmoothedAbsolute, "smoothed_absolute", 1);
  g.delta_ = delta;
  return g;
}

BoundaryFunction BoundaryFunction::studentized() {
  return BoundaryFunction(Kind::Studentized, "studentized", 2);
}

BoundaryFunction BoundaryFunction::custom(std::string name, int dim, Fn fn, GradFn grad) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("custom boundary: dimension out of range");
  if (!fn) throw std::invalid_argument("custom boundary: empty function");
  BoundaryFunction g(Kind::Custom, std::move(name), dim);
  g.fn_ = std::move(fn);
  g.grad_ = std::move(grad);
  return g;
}

double BoundaryFunction::operator()(std::span<const double> x) const {
  switch (kind_) {
    case Kind::Quadratic:
      return 0.5 * x[0] * x[0];
    case Kind::SmoothedAbsolute: {
      const double ax = std::fabs(x[0]);
      if (ax <= delta_) return (delta_ * delta_ + x[0] * x[0]) / (2.0 * delta_);
      return ax;
    }
    case Kind::Studentized: {
      const double eta2 = x[0] * x[0];
      const double spread = x[1] - eta2;
      if (spread > 0.0) return eta2 / (2.0 * spread);
      // Zero spread: the studentized statistic is infinite unless eta = 0.
      if (spread == 0.0 && eta2 > 0.0) return std::numeric_limits<double>::infinity();
      return 0.0;
    }
    case Kind::Custom:
      return fn_(x);
  }
  return 0.0;
}

void BoundaryFunction::gradient(std::span<const double> x, std::span<double> out) const {
  switch (kind_) {
    case Kind::Quadratic:
      out[0] = x[0];
      return;
    case Kind::SmoothedAbsolute:
      out[0] = std::fabs(x[0]) <= delta_ ? x[0] / delta_ : (x[0] > 0.0 ? 1.0 : -1.0);
      return;
    case Kind::Studentized: {
      const double spread = x[1] - x[0] * x[0];
      if (spread > 0.0) {
        const double s2 = spread * spread;
        out[0] = x[0] * x[1] / s2;
        out[1] = -0.5 * x[0] * x[0] / s2;
      } else {
        out[0] = 0.0;
        out[1] = 0.0;
      }
      return;
    }
    case Kind::Custom:
      if (grad_) {
        grad_(x, out);
      } else {
        central_gradient([this](std::span<const double> p) { return fn_(p); }, x, out);
      }
      return;
  }
}

StoppingRule::StoppingRule(BoundaryFunction g, double a, int n0, int n1, Monitoring monitoring)
    : g_(std::move(g)), a_(a), n0_(n0), n1_(n1), monitoring_(monitoring) {
  if (!(a > 0.0)) throw std::invalid_argument("stopping rule: threshold a must be > 0");
  if (n1 < 1 || n1 > n0) throw std::invalid_argument("stopping rule: need 1 <= n1 <= n0");
}

namespace presets {

StoppingRule repeated_significance_test() {
  return StoppingRule(BoundaryFunction::quadratic(), 4.5, 75, 15);
}

StoppingRule studentized_repeated_significance_test() {
  return StoppingRule(BoundaryFunction::studentized(), 4.5, 75, 15);
}

StoppingRule smoothed_absolute_test(double delta) {
  return StoppingRule(BoundaryFunction::smoothed_absolute(delta), 9.0, 72, 1);
}

}  // namespace presets

bool StoppingMonitor::observe(std::span<const double> x) {
  const int d = rule_->dim();
  ++n_;
  for (int i = 0; i < d; ++i) sums_[i].add(x[i]);
  if (n_ >= rule_->n0()) return true;
  const bool watching = rule_->monitoring() == Monitoring::FirstPassage || n_ >= rule_->n1();
  if (!crossed_ && watching) {
    for (int i = 0; i < d; ++i) mean_[i] = sums_[i].value() / n_;
    const double stat = n_ * rule_->g()(std::span<const double>(mean_.data(), static_cast<std::size_t>(d)));
    crossed_ = stat >= rule_->a();
  }
  return crossed_ && n_ >= rule_->n1();
}

void StoppingMonitor::reset() {
  sums_.fill(CompensatedSum{});
  n_ = 0;
  crossed_ = false;
}

int stopping_time_of(const StoppingRule& rule, const std::vector<std::vector<double>>& xs) {
  std::size_t i = 0;
  return stopping_time_of(rule, [&](std::span<double> out) {
    if (i >= xs.size()) throw std::invalid_argument("stopping_time_of: sequence exhausted before stopping");
    const auto& v = xs[i++];
    if (v.size() != out.size()) throw std::invalid_argument("stopping_time_of: dimension mismatch");
    std::copy(v.begin(), v.end(), out.begin());
  });
}

void StoppedSample::clear(int d) {
  T = 0;
  dim = d;
  scalars.clear();
  obs.clear();
  sums.assign(static_cast<std::size_t>(d), 0.0);
  mean.assign(static_cast<std::size_t>(d), 0.0);
  accumulators.assign(static_cast<std::size_t>(d), CompensatedSum{});
}

void StoppedSample::push(double scalar, std::span<const double> lifted) {
  scalars.push_back(scalar);
  obs.insert(obs.end(), lifted.begin(), lifted.end());
  for (int i = 0; i < dim; ++i) {
    accumulators[i].add(lifted[i]);
    sums[i] = accumulators[i].value();
  }
  ++T;
}

void StoppedSample::finish() {
  for (int i = 0; i < dim; ++i) mean[i] = sums[i] / T;
}

StoppedSample StoppedSample::from_scalars(const ObservationMap& map, std::span<const double> xs) {
  StoppedSample s;
  s.clear(map.dim());
  std::array<double, kMaxDim> lifted{};
  std::span<double> view(lifted.data(), static_cast<std::size_t>(map.dim()));
  for (double x : xs) {
    map.lift(x, view);
    s.push(x, view);
  }
  if (s.T > 0) s.finish();
  return s;
}

void run_trial_into(const StoppingRule& rule, const Population& pop, const ObservationMap& map,
                    RandomStream& stream, StoppedSample& out) {
  if (map.dim() != rule.dim()) throw std::invalid_argument("run_trial: observation map and rule dimensions differ");
  out.clear(map.dim());
  StoppingMonitor monitor(rule);
  std::array<double, kMaxDim> lifted{};
  std::span<double> view(lifted.data(), static_cast<std::size_t>(map.dim()));
  for (;;) {
    const double x = pop.draw(stream);
    map.lift(x, view);
    out.push(x, view);
    if (monitor.observe(view)) break;
  }
  out.finish();
}

StoppedSample run_trial(const StoppingRule& rule, const Population& pop,
                        const ObservationMap& map, RandomStream& stream) {
  StoppedSample s;
  run_trial_into(rule, pop, map, stream, s);
  return s;
}

double kappa(const StoppingRule& rule, std::span<const double> mu) {
  return std::max(rule.eps0(), std::min(rule.g()(mu), rule.eps1()));
}

}  // namespace seqinfer
