// SPDX-License-Identifier: Apache-2.0
#include "seqinfer/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/students_t.hpp>

namespace seqinfer {

namespace {

template <std::size_t N>
double horner(const double (&c)[N], double x) {
  double acc = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

void check_probability(double p, const char* who) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error(std::string(who) + ": probability must lie in (0, 1), got " +
                            std::to_string(p));
  }
}

// Order statistic of rank k (0-based) and the next one, via nth_element.
std::pair<double, double> adjacent_order_stats(std::span<double> v, std::size_t k) {
  auto kth = v.begin() + static_cast<std::ptrdiff_t>(k);
  std::nth_element(v.begin(), kth, v.end());
  const double lo = *kth;
  if (k + 1 >= v.size()) return {lo, lo};
  const double hi = *std::min_element(kth + 1, v.end());
  return {lo, hi};
}

double interpolate_at(std::span<double> v, double p) {
  const double h = static_cast<double>(v.size() - 1) * p;
  const double fl = std::floor(h);
  const auto k = static_cast<std::size_t>(fl);
  const auto [lo, hi] = adjacent_order_stats(v, k);
  return lo + (h - fl) * (hi - lo);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  check_probability(p, "normal_quantile");

  static constexpr double a[] = {3.3871328727963666080e0, 1.3314166789178437745e+2,
                                 1.9715909503065514427e+3, 1.3731693765509461125e+4,
                                 4.5921953931549871457e+4, 6.7265770927008700853e+4,
                                 3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static constexpr double b[] = {1.0,
                                 4.2313330701600911252e+1, 6.8718700749205790830e+2,
                                 5.3941960214247511077e+3, 2.1213794301586595867e+4,
                                 3.9307895800092710610e+4, 2.8729085735721942674e+4,
                                 5.2264952788528545610e+3};
  static constexpr double c[] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                                 5.76949722146069140550e0, 3.64784832476320460504e0,
                                 1.27045825245236838258e0, 2.41780725177450611770e-1,
                                 2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr double d[] = {1.0,
                                 2.05319162663775882187e0, 1.67638483018380384940e0,
                                 6.89767334985100004550e-1, 1.48103976427480074590e-1,
                                 1.51986665636164571966e-2, 5.47593808499534494600e-4,
                                 1.05075007164441684324e-9};
  static constexpr double e[] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                                 1.78482653991729133580e0, 2.96560571828504891230e-1,
                                 2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                 2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[] = {1.0,
                                 5.99832206555887937690e-1, 1.36929880922735805310e-1,
                                 1.48753612908506148525e-2, 7.86869131145613259100e-4,
                                 1.84631831751005468180e-5, 1.42151175831644588870e-7,
                                 2.04426310338993978564e-15};

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * horner(a, r) / horner(b, r);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = horner(c, r) / horner(d, r);
  } else {
    r -= 5.0;
    x = horner(e, r) / horner(f, r);
  }
  return q < 0.0 ? -x : x;
}

double t_quantile(double p, int df) {
  check_probability(p, "t_quantile");
  if (df < 1) throw std::domain_error("t_quantile: degrees of freedom must be >= 1");
  if (p == 0.5) return 0.0;
  boost::math::students_t_distribution<double> dist(static_cast<double>(df));
  return boost::math::quantile(dist, p);
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("empirical_quantile: empty list");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("empirical_quantile: p outside [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const double fl = std::floor(h);
  const auto k = static_cast<std::size_t>(fl);
  if (k + 1 >= sorted.size()) return sorted[k];
  return sorted[k] + (h - fl) * (sorted[k + 1] - sorted[k]);
}

double empirical_quantile(std::span<const double> values, double p) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted_quantile(sorted, p);
}

std::pair<double, double> quantile_pair_inplace(std::span<double> values, double alpha) {
  if (values.empty()) throw std::invalid_argument("quantile_pair: empty list");
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::domain_error("quantile_pair: alpha must lie in (0, 0.5)");
  const double lo = interpolate_at(values, alpha);
  const double hi = interpolate_at(values, 1.0 - alpha);
  return {lo, hi};
}

}  // namespace seqinfer
