// SPDX-License-Identifier: Apache-2.0
#include "seqinfer/pivots.hpp"

#include <cmath>
#include <stdexcept>

#include "seqinfer/differentiation.hpp"
#include "seqinfer/errors.hpp"

namespace seqinfer {

Matrix Matrix::identity(int size) {
  Matrix m(size);
  for (int i = 0; i < size; ++i) m(i, i) = 1.0;
  return m;
}

double quadratic_form(std::span<const double> u, const Matrix& m, std::span<const double> v) {
  double acc = 0.0;
  for (int i = 0; i < m.n; ++i) {
    double row = 0.0;
    for (int j = 0; j < m.n; ++j) row += m(i, j) * v[j];
    acc += u[i] * row;
  }
  return acc;
}

SmoothFunctional::SmoothFunctional(int dim, Fn fn, GradFn grad, HessFn hess)
    : dim_(dim), fn_(std::move(fn)), grad_(std::move(grad)), hess_(std::move(hess)) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("smooth functional: dimension out of range");
  if (!fn_) throw std::invalid_argument("smooth functional: empty function");
}

SmoothFunctional SmoothFunctional::coordinate(int dim, int index) {
  if (index < 0 || index >= dim) throw std::invalid_argument("coordinate functional: index out of range");
  SmoothFunctional h(dim, [index](std::span<const double> x) { return x[index]; });
  h.coordinate_ = index;
  return h;
}

double SmoothFunctional::operator()(std::span<const double> x) const {
  if (coordinate_) return x[*coordinate_];
  return fn_(x);
}

std::vector<double> SmoothFunctional::gradient(std::span<const double> x) const {
  if (coordinate_) {
    std::vector<double> e(static_cast<std::size_t>(dim_), 0.0);
    e[*coordinate_] = 1.0;
    return e;
  }
  if (grad_) return grad_(x);
  std::vector<double> out(static_cast<std::size_t>(dim_));
  central_gradient(fn_, x, out);
  return out;
}

Matrix SmoothFunctional::hessian(std::span<const double> x) const {
  if (coordinate_) return Matrix(dim_);
  if (hess_) return hess_(x);
  Matrix m(dim_);
  m.a = central_hessian(fn_, x);
  return m;
}

MomentEstimates moment_estimates(const StoppedSample& sample, const SmoothFunctional& h) {
  if (sample.T < 2) throw NumericError("degenerate sample");
  const int d = sample.dim;
  MomentEstimates est{Matrix(d), 0.0};
  for (int t = 0; t < sample.T; ++t) {
    const auto x = sample.observation(t);
    for (int i = 0; i < d; ++i) {
      const double di = x[i] - sample.mean[i];
      for (int j = 0; j <= i; ++j) est.V(i, j) += di * (x[j] - sample.mean[j]);
    }
  }
  const double denom = static_cast<double>(sample.T - 1);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      est.V(i, j) /= denom;
      est.V(j, i) = est.V(i, j);
    }
  }
  const auto grad = h.gradient(sample.mean);
  est.sigma = std::sqrt(std::max(0.0, quadratic_form(grad, est.V, grad)));
  return est;
}

KappaGradient grad_kappa_sqrt(const StoppingRule& rule, std::span<const double> mu) {
  KappaGradient out{std::vector<double>(mu.size(), 0.0), false};
  const double g = rule.g()(mu);
  if (std::fabs(g - rule.eps0()) <= kKinkTolerance || std::fabs(g - rule.eps1()) <= kKinkTolerance) {
    out.kink = true;
    return out;
  }
  if (g > rule.eps0() && g < rule.eps1()) {
    rule.g().gradient(mu, out.value);
    const double scale = 0.5 / std::sqrt(g);
    for (double& v : out.value) v *= scale;
  }
  return out;
}

double bias_b(const StoppingRule& rule, std::span<const double> mu, const Matrix& V,
              const SmoothFunctional& h) {
  const auto gk = grad_kappa_sqrt(rule, mu);
  const double k = kappa(rule, mu);
  const auto gh = h.gradient(mu);
  double b = quadratic_form(gk.value, V, gh) / std::sqrt(k);
  if (!h.coordinate_index()) {
    const Matrix H = h.hessian(mu);
    double trace = 0.0;
    for (int i = 0; i < V.n; ++i)
      for (int j = 0; j < V.n; ++j) trace += H(i, j) * V(j, i);
    b += 0.5 * trace;
  }
  return b;
}

namespace {

// R0 geometry; optionally hands back the covariance used for the bias term.
AffineRoot naive_root(const StoppedSample& sample, const SmoothFunctional& h, VarianceMode mode,
                      Matrix* V) {
  if (sample.T < 1) throw NumericError("degenerate sample");
  AffineRoot r;
  r.sqrt_T = std::sqrt(static_cast<double>(sample.T));
  r.center = h(sample.mean);
  if (mode == VarianceMode::KnownUnit) {
    if (V) *V = Matrix::identity(sample.dim);
    return r;
  }
  auto est = moment_estimates(sample, h);
  if (!(est.sigma > 0.0)) throw NumericError("zero estimated variance");
  r.scale = est.sigma;
  if (V) *V = std::move(est.V);
  return r;
}

}  // namespace

AffineRoot affine_root(RootKind kind, const StoppedSample& sample, const StoppingRule& rule,
                       const SmoothFunctional& h, VarianceMode mode) {
  if (kind == RootKind::RRenorm && (mode != VarianceMode::KnownUnit || sample.dim != 1)) {
    throw std::invalid_argument("renormalized root needs d = 1 and known unit variance");
  }
  if (kind == RootKind::R0) return naive_root(sample, h, mode, nullptr);
  Matrix V;
  AffineRoot r = naive_root(sample, h, mode, &V);
  const double b = bias_b(rule, sample.mean, V, h);
  r.shift = b / r.sqrt_T;
  if (kind == RootKind::RRenorm) r.scale = 1.0 + b * b / (2.0 * sample.T);
  return r;
}

double eval_R0(const StoppedSample& sample, const SmoothFunctional& h, double theta,
               VarianceMode mode) {
  return naive_root(sample, h, mode, nullptr).value(theta);
}

double eval_R1(const StoppedSample& sample, const StoppingRule& rule, const SmoothFunctional& h,
               double theta, VarianceMode mode) {
  return affine_root(RootKind::R1, sample, rule, h, mode).value(theta);
}

double eval_R(const StoppedSample& sample, const StoppingRule& rule, double mu) {
  return affine_root(RootKind::RRenorm, sample, rule, SmoothFunctional::coordinate(1), VarianceMode::KnownUnit)
      .value(mu);
}

}  // namespace seqinfer
