// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace seqinfer {

using ScalarField = std::function<double(std::span<const double>)>;

/// Central differences, step cbrt(eps) * max(1, |x_i|) per coordinate.
inline void central_gradient(const ScalarField& f, std::span<const double> x, std::span<double> out) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = base * std::max(1.0, std::fabs(x[i]));
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    out[i] = (up - down) / (2.0 * h);
  }
}

/// Nested central differences; row-major d x d result. Uses a fourth-root
/// step since two difference quotients are stacked.
inline std::vector<double> central_hessian(const ScalarField& f, std::span<const double> x) {
  static const double base = std::sqrt(std::sqrt(std::numeric_limits<double>::epsilon()));
  const std::size_t d = x.size();
  std::vector<double> out(d * d);
  std::vector<double> probe(x.begin(), x.end());
  auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
    probe[i] += di;
    probe[j] += dj;
    const double v = f(probe);
    probe[i] = x[i];
    probe[j] = x[j];
    return v;
  };
  for (std::size_t i = 0; i < d; ++i) {
    const double hi = base * std::max(1.0, std::fabs(x[i]));
    for (std::size_t j = i; j < d; ++j) {
      const double hj = base * std::max(1.0, std::fabs(x[j]));
      double v;
      if (i == j) {
        v = (at(i, 2 * hi, i, 0.0) - 2.0 * f(x) + at(i, -2 * hi, i, 0.0)) / (4.0 * hi * hi);
      } else {
        v = (at(i, hi, j, hj) - at(i, hi, j, -hj) - at(i, -hi, j, hj) + at(i, -hi, j, -hj)) /
            (4.0 * hi * hj);
      }
      out[i * d + j] = v;
      out[j * d + i] = v;
    }
  }
  return out;
}

}  // namespace seqinfer
