// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "seqinfer/numerics.hpp"
#include "seqinfer/resampling.hpp"

using namespace seqinfer;

namespace {

RootSpec known_spec(RootKind kind = RootKind::R0) {
  return RootSpec{kind, presets::repeated_significance_test(), ObservationMap::identity(),
                  SmoothFunctional::coordinate(1), VarianceMode::KnownUnit};
}

std::vector<double> normal_sample(std::uint64_t seed, int n, double mu) {
  RandomStream s(seed, 0);
  const auto pop = Population::normal(mu, 1.0);
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (double& x : xs) x = pop.draw(s);
  return xs;
}

// Two-sample Kolmogorov-Smirnov statistic on sorted inputs.
double ks_statistic(const std::vector<double>& a, const std::vector<double>& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_SUITE("resampling") {
  TEST_CASE("bootstrap from a single atom gives a point mass at zero") {
    const std::vector<double> xs(20, 0.7);
    const auto roots =
        simulate_root_distribution(ResamplingFamily::bootstrap(xs), 0.0, known_spec(), 200, RandomStream(1, 0));
    REQUIRE(roots.size() == 200);
    for (double r : roots) CHECK(r == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }

  TEST_CASE("empty support is rejected") {
    const std::vector<double> none;
    CHECK_THROWS(RootSimulator(ResamplingFamily::bootstrap(none), known_spec(), 10, RandomStream(1, 0)));
    CHECK_THROWS(RootSimulator(ResamplingFamily::bootstrap(std::vector<double>{1.0}), known_spec(), 0,
                               RandomStream(1, 0)));
  }

  TEST_CASE("hybrid family around a symmetric sample has median near zero") {
    std::vector<double> xs = normal_sample(2, 30, 0.0);
    const std::size_t n = xs.size();
    for (std::size_t i = 0; i < n; ++i) xs.push_back(-xs[i]);
    const auto roots = simulate_root_distribution(ResamplingFamily::hybrid_shift(xs), 0.0, known_spec(), 4000,
                                                  RandomStream(3, 0));
    CHECK(std::fabs(sorted_quantile(roots, 0.5)) < 0.1);
  }

  TEST_CASE("parametric normal family at zero reproduces the lower root quantile") {
    // Oracle: tests/oracles/monte_carlo.py, q_0.025 of R0 = -2.0359 at mu = 0.
    const auto roots = simulate_root_distribution(ResamplingFamily::parametric(Population::normal(0.0, 1.0)), 0.0,
                                                  known_spec(), 10000, RandomStream(4, 0));
    CHECK(std::fabs(sorted_quantile(roots, 0.025) - (-2.035938)) < 0.1);
  }

  TEST_CASE("roots at -theta mirror roots at theta for a symmetric law") {
    const auto family = ResamplingFamily::parametric(Population::normal(0.0, 1.0));
    const auto up = simulate_root_distribution(family, 0.3, known_spec(), 4000, RandomStream(5, 0));
    auto down = simulate_root_distribution(family, -0.3, known_spec(), 4000, RandomStream(5, 1));
    for (double& r : down) r = -r;
    std::sort(down.begin(), down.end());
    CHECK(ks_statistic(up, down) < 1.36 * std::sqrt(2.0 / 4000));
  }

  TEST_CASE("raw hybrid at theta-hat is the bootstrap") {
    const auto xs = normal_sample(6, 40, 0.4);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    RootSimulator boot(ResamplingFamily::bootstrap(xs), known_spec(RootKind::R1), 300, RandomStream(7, 0));
    RootSimulator hyb(ResamplingFamily::hybrid_shift(xs), known_spec(RootKind::R1), 300, RandomStream(7, 0));
    CHECK(boot.evaluation_point(123.0) == doctest::Approx(mean).epsilon(1e-14));
    const auto a = boot.sorted_roots(0.0);
    const auto b = hyb.sorted_roots(mean);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9).scale(1.0));
  }

  TEST_CASE("unit-variance residuals are centred and scaled") {
    const std::vector<double> xs{1.0, 2.0, 4.0, 9.0};
    const auto fam = ResamplingFamily::hybrid_shift(xs, ResamplingFamily::ResidualScale::UnitVariance);
    const auto& res = *std::get<ShiftedEmpirical>(fam.noise_law().variant()).residuals;
    double s1 = 0.0;
    double s2 = 0.0;
    for (double r : res) {
      s1 += r;
      s2 += r * r;
    }
    CHECK(s1 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(s2 / res.size() == doctest::Approx(1.0).epsilon(1e-14));

    const auto flat = ResamplingFamily::hybrid_shift(std::vector<double>(5, 2.0),
                                                     ResamplingFamily::ResidualScale::UnitVariance);
    for (double r : *std::get<ShiftedEmpirical>(flat.noise_law().variant()).residuals) CHECK(r == 0.0);
  }

  TEST_CASE("same stream gives the same roots") {
    const auto xs = normal_sample(8, 30, 0.2);
    const auto family = ResamplingFamily::hybrid_shift(xs);
    const auto a = simulate_root_distribution(family, 0.1, known_spec(), 500, RandomStream(9, 4));
    const auto b = simulate_root_distribution(family, 0.1, known_spec(), 500, RandomStream(9, 4));
    const auto c = simulate_root_distribution(family, 0.1, known_spec(), 500, RandomStream(9, 5));
    CHECK(a == b);
    CHECK(a != c);
  }

  TEST_CASE("the acceptance indicator is monotone in theta under common random numbers") {
    // The root is decreasing in theta for fixed resamples of the bootstrap.
    const auto xs = normal_sample(10, 30, 0.0);
    RootSimulator sim(ResamplingFamily::bootstrap(xs), known_spec(), 200, RandomStream(10, 1));
    const auto first = sim.sorted_roots(0.0);
    const auto again = sim.sorted_roots(0.5);
    CHECK(first == again);
  }

  TEST_CASE("quantile pair") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0, 5.0};
    const auto [lo, hi] = quantile_pair(v, 0.25);
    CHECK(lo == 2.0);
    CHECK(hi == 4.0);
    const std::vector<double> one{3.5};
    CHECK(quantile_pair(one, 0.05) == std::pair<double, double>{3.5, 3.5});
    CHECK_THROWS(quantile_pair(std::vector<double>{}, 0.05));
    CHECK_THROWS(quantile_pair(v, 0.5));
    CHECK_THROWS(quantile_pair(v, 0.0));
  }

  TEST_CASE("parametric family rejects an empirical base") {
    CHECK_THROWS(ResamplingFamily::parametric(Population::empirical({1.0, 2.0})));
    const auto fam = ResamplingFamily::parametric(Population::mixture(1.5));
    CHECK(fam.at(0.25).location() == doctest::Approx(0.25));
  }

  TEST_CASE("noise bank rows are independent of fill order") {
    NoiseBank lazy(Population::normal(0.0, 1.0), 3, 50, RandomStream(12, 0));
    NoiseBank full(Population::normal(0.0, 1.0), 3, 50, RandomStream(12, 0));
    full.fill_all();
    CHECK(lazy.value(2, 40) == full.value(2, 40));
    CHECK(lazy.value(0, 3) == full.value(0, 3));
    CHECK_THROWS(lazy.value(0, 50));
  }
}
