// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <utility>
#include <vector>

namespace seqinfer {

double normal_cdf(double x);

/// Inverse standard normal CDF (Wichura's AS241, PPND16). Throws
/// std::domain_error unless 0 < p < 1.
double normal_quantile(double p);

/// Inverse CDF of Student's t with `df` degrees of freedom.
double t_quantile(double p, int df);

/// Linear interpolation between order statistics: with the values sorted
/// ascending and h = (n - 1)p + 1 (1-based), returns
/// x[floor(h)] + (h - floor(h)) (x[floor(h) + 1] - x[floor(h)]).
double empirical_quantile(std::span<const double> values, double p);

/// Same convention on an already sorted range.
double sorted_quantile(std::span<const double> sorted, double p);

/// (alpha, 1 - alpha) quantiles. Reorders `values` in place with
/// nth_element; the result equals quantiles of the fully sorted list.
std::pair<double, double> quantile_pair_inplace(std::span<double> values, double alpha);

}  // namespace seqinfer
