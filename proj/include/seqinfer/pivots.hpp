// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "seqinfer/stopping.hpp"

namespace seqinfer {

/// Small dense square matrix, row-major.
struct Matrix {
  int n = 0;
  std::vector<double> a;

  Matrix() = default;
  explicit Matrix(int size, double fill = 0.0) : n(size), a(static_cast<std::size_t>(size) * size, fill) {}
  static Matrix identity(int size);

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

/// u' M v
double quadratic_form(std::span<const double> u, const Matrix& m, std::span<const double> v);

/// Smooth function h of the mean vector, with optional analytic derivatives.
class SmoothFunctional {
 public:
  using Fn = std::function<double(std::span<const double>)>;
  using GradFn = std::function<std::vector<double>(std::span<const double>)>;
  using HessFn = std::function<Matrix(std::span<const double>)>;

  SmoothFunctional(int dim, Fn fn, GradFn grad = {}, HessFn hess = {});

  /// h(x) = x[index]; analytic gradient e_index and zero Hessian.
  static SmoothFunctional coordinate(int dim, int index = 0);

  double operator()(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;
  Matrix hessian(std::span<const double> x) const;

  int dim() const { return dim_; }
  bool has_analytic_gradient() const { return static_cast<bool>(grad_) || coordinate_; }
  bool has_analytic_hessian() const { return static_cast<bool>(hess_) || coordinate_; }
  /// Set for coordinate projections.
  std::optional<int> coordinate_index() const { return coordinate_; }

 private:
  int dim_;
  Fn fn_;
  GradFn grad_;
  HessFn hess_;
  std::optional<int> coordinate_;
};

enum class VarianceMode {
  /// Var(X) = 1 known; sigma = 1 and V = I.
  KnownUnit,
  /// V and sigma estimated from the stopped sample.
  Estimated,
};

struct MomentEstimates {
  Matrix V;            ///< sample covariance of the lifted observations, divisor T - 1
  double sigma = 0.0;  ///< sqrt(grad h' V grad h) at the sample mean
};

/// Throws NumericError("degenerate sample") when T < 2.
MomentEstimates moment_estimates(const StoppedSample& sample, const SmoothFunctional& h);

struct KappaGradient {
  std::vector<double> value;
  bool kink = false;
};

inline constexpr double kKinkTolerance = 1e-9;

/// Gradient of sqrt(kappa): grad g / (2 sqrt g) strictly inside (eps0, eps1),
/// zero in the clamped regions and (flagged) within kKinkTolerance of a kink.
KappaGradient grad_kappa_sqrt(const StoppingRule& rule, std::span<const double> mu);

/// First-order bias of sqrt(T){h(Xbar_T) - h(mu)}, scaled so that
/// E[...] ~ b (kappa / a)^(1/2):
///   (grad sqrt(kappa))' V grad h / sqrt(kappa) + tr(hess h V) / 2.
double bias_b(const StoppingRule& rule, std::span<const double> mu, const Matrix& V,
              const SmoothFunctional& h);

enum class RootKind {
  R0,        ///< naive pivot
  R1,        ///< bias-corrected pivot
  RRenorm,   ///< bias-corrected and renormalized; d = 1, known unit variance only
};

/// Every root here is affine and strictly decreasing in theta:
///   r(theta) = (sqrt(T) (center - theta) - shift) / scale.
struct AffineRoot {
  double sqrt_T = 1.0;
  double center = 0.0;  ///< h(Xbar_T)
  double shift = 0.0;   ///< T^(-1/2) b for R1 and R, else 0
  double scale = 1.0;   ///< sigma_hat (R0, R1) or 1 + b^2 / (2T) (R)

  double value(double theta) const { return (sqrt_T * (center - theta) - shift) / scale; }
  /// The theta with value(theta) == u.
  double invert(double u) const { return center - (u * scale + shift) / sqrt_T; }
};

/// Builds the affine form of a root from a stopped sample. Throws
/// NumericError("zero estimated variance") when sigma_hat = 0 in estimated mode.
AffineRoot affine_root(RootKind kind, const StoppedSample& sample, const StoppingRule& rule,
                       const SmoothFunctional& h, VarianceMode mode);

/// sqrt(T)(h(Xbar_T) - theta) / sigma_hat
double eval_R0(const StoppedSample& sample, const SmoothFunctional& h, double theta,
               VarianceMode mode);
/// [sqrt(T)(h(Xbar_T) - theta) - T^(-1/2) b(Xbar_T, V_hat)] / sigma_hat
double eval_R1(const StoppedSample& sample, const StoppingRule& rule, const SmoothFunctional& h,
               double theta, VarianceMode mode);
/// {sqrt(T)(Xbar_T - mu) - T^(-1/2) b} / {1 + b^2 / (2T)}, variance 1, d = 1.
double eval_R(const StoppedSample& sample, const StoppingRule& rule, double mu);

}  // namespace seqinfer
