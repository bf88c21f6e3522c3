// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "seqinfer/pivots.hpp"
#include "seqinfer/sampling.hpp"
#include "seqinfer/stopping.hpp"

namespace seqinfer {

/// What a resampled stopped sample is fed through: the root, the rule that
/// stops the resample, how scalars are lifted, and the variance treatment.
struct RootSpec {
  RootKind kind = RootKind::R0;
  StoppingRule rule;
  ObservationMap map = ObservationMap::identity();
  SmoothFunctional h = SmoothFunctional::coordinate(1);
  VarianceMode variance = VarianceMode::KnownUnit;

  /// Throws std::invalid_argument on inconsistent combinations.
  void validate() const;
};

/// Resampling family F_theta. Every family is a location family over a fixed
/// noise law, so the draws for replicate b are the same at every theta.
class ResamplingFamily {
 public:
  enum class Kind {
    Bootstrap,    ///< empirical distribution of the stopped sample; ignores theta
    HybridShift,  ///< theta + (X_i - Xbar_T)
    Parametric,   ///< a parametric population relocated to theta
  };

  static ResamplingFamily bootstrap(std::span<const double> scalars);
  /// Residuals X_i - Xbar_T as they are, or rescaled to unit variance
  /// (divisor T) when Var(X_i) = 1 is assumed.
  enum class ResidualScale { Raw, UnitVariance };
  static ResamplingFamily hybrid_shift(std::span<const double> scalars, ResidualScale scale = ResidualScale::Raw);
  static ResamplingFamily parametric(Population base);

  Kind kind() const { return kind_; }
  const Population& noise_law() const { return law_; }
  /// F_theta; for Bootstrap this is F-hat whatever theta is.
  Population at(double theta) const;
  /// Location added to the noise law at theta.
  double location_at(double theta) const { return kind_ == Kind::Bootstrap ? 0.0 : theta; }

 private:
  ResamplingFamily(Kind kind, Population law) : kind_(kind), law_(std::move(law)) {}
  Kind kind_;
  Population law_;
};

/// Noise draws for B replicates, row b drawn from stream.child(b). Rows fill
/// lazily; a fully filled bank is read-only and may be shared across threads.
class NoiseBank {
 public:
  NoiseBank(Population law, int rows, int max_len, RandomStream stream);

  double value(int row, int i) {
    auto& r = rows_[static_cast<std::size_t>(row)];
    if (static_cast<std::size_t>(i) >= r.size()) extend(row, i + 1);
    return r[static_cast<std::size_t>(i)];
  }
  void fill_all();

  int rows() const { return static_cast<int>(rows_.size()); }
  int max_len() const { return max_len_; }

 private:
  void extend(int row, int len);

  Population law_;
  int max_len_;
  RandomStream stream_;
  std::vector<std::vector<double>> rows_;
};

/// Simulates the sampling distribution of a root under a resampling family.
class RootSimulator {
 public:
  RootSimulator(ResamplingFamily family, RootSpec spec, int B, RandomStream stream);
  /// Shares a prefilled bank, e.g. one exact-method bank across many trials.
  RootSimulator(ResamplingFamily family, RootSpec spec, std::shared_ptr<NoiseBank> bank);

  /// B root values, unsorted, valid until the next call.
  std::span<double> roots(double theta);
  std::vector<double> sorted_roots(double theta);
  /// (alpha, 1 - alpha) quantiles of the root distribution at theta.
  std::pair<double, double> quantiles(double theta, double alpha);

  int B() const { return bank_->rows(); }
  /// Value at which resampled roots are evaluated: theta-hat for Bootstrap, theta otherwise.
  double evaluation_point(double theta) const;

 private:
  ResamplingFamily family_;
  RootSpec spec_;
  std::shared_ptr<NoiseBank> bank_;
  double bootstrap_center_ = 0.0;
  StoppedSample scratch_;
  std::vector<double> values_;
};

/// Sorted list of B simulated root values at theta.
std::vector<double> simulate_root_distribution(const ResamplingFamily& family, double theta,
                                               const RootSpec& spec, int B, RandomStream stream);

/// (alpha, 1 - alpha) empirical quantiles of a sorted list.
std::pair<double, double> quantile_pair(std::span<const double> sorted_values, double alpha);

}  // namespace seqinfer
