// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "seqinfer/config.hpp"
#include "seqinfer/errors.hpp"
#include "seqinfer/harness.hpp"
#include "seqinfer/report.hpp"

using namespace seqinfer;

namespace {

const char* kSmall = R"({
  "scenario": {"g": "quadratic", "a": 4.5, "n0": 75, "n1": 15},
  "population": {"variant": "normal"},
  "mu_list": [0.0, 0.4],
  "methods": ["normal_r0", "normal_r1", "normal_r", "boot_r1", "whole_line"],
  "n_sims": 400,
  "B": 100,
  "seed": 3
})";

CoverageReport sample_report() {
  CoverageReport r;
  r.rows.push_back({0.2, Method::NormalR1, 5.79, 4.1, 0.233, 0.198, 0.4149, 66.6, 10000, 0});
  r.rows.push_back({1.2, Method::Hybrid, 5.0, 4.5, 0.218, 0.207, 1.0 / 3.0, 15.0001, 10000, 0});
  return r;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("config parsing rejects unknown and inconsistent fields") {
    CHECK_NOTHROW(parse_config(kSmall));
    std::string extra = kSmall;
    extra.insert(extra.find("\"seed\""), "\"sedd\": 4, ");
    CHECK_THROWS_AS(parse_config(extra), ConfigError);
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": {"g": "quadratic", "a": 4.5, "n0": 75, "n1": 15, "colour": 1},
                                     "population": {"variant": "normal"}, "mu_list": [0]})"),
                    ConfigError);
    // Hybrid needs known variance.
    CHECK_THROWS_AS(parse_config(R"({"scenario": {"g": "quadratic", "a": 4.5, "n0": 75, "n1": 15,
                                                  "variance": "estimated"},
                                     "population": {"variant": "normal"}, "mu_list": [0], "methods": ["hybrid"]})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": {"g": "quadratic", "a": 4.5, "n0": 75, "n1": 15},
                                     "population": {"variant": "normal"}, "mu_list": [0], "n_sims": 0})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": {"g": "quadratic", "a": 4.5, "n0": 75, "n1": 15},
                                     "population": {"variant": "normal"}, "mu_list": [0], "delta_sweep": [0.5]})"),
                    ConfigError);
  }

  TEST_CASE("fast profile") {
    auto cfg = parse_config(kSmall);
    apply_fast_profile(cfg);
    CHECK(cfg.n_sims == 2000);
    CHECK(cfg.B == 500);
    CHECK(cfg.exact_B == 500);
    CHECK(cfg.grid.points == 61);
  }

  TEST_CASE("scenario presets") {
    CHECK(resolve_scenario("rst").rule.n0() == 75);
    const auto st = resolve_scenario("studentized_rst");
    CHECK(st.map.kind() == ObservationMap::Kind::Square);
    CHECK(st.variance == VarianceMode::Estimated);
    const auto sa = resolve_scenario("smoothed_absolute:0.25");
    CHECK(sa.rule.g().delta() == 0.25);
    CHECK(sa.rule.n1() == 1);
    CHECK_THROWS_AS(resolve_scenario("no_such_rule"), ConfigError);
  }

  TEST_CASE("dataset parsing") {
    CHECK(parse_dataset("1.5\n-2\n\n3e-1\n") == std::vector<double>{1.5, -2.0, 0.3});
    CHECK(parse_dataset("x\n0.25\n0.75\n") == std::vector<double>{0.25, 0.75});
    CHECK(parse_dataset("").empty());
    try {
      parse_dataset("1\n2\nfoo\n");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS(load_dataset("/nonexistent/data.csv"));
  }

  TEST_CASE("interval for a dataset flags a rule mismatch") {
    const auto scenario = resolve_scenario("rst");
    const std::vector<double> stops(25, 0.6);
    const auto ok = interval_for_data(stops, scenario, Method::NormalR0, 0.05, 100, 1);
    CHECK_FALSE(ok.diagnostics.has_flag("rule-inconsistent"));
    const std::vector<double> early(10, 0.6);
    const auto bad = interval_for_data(early, scenario, Method::NormalR0, 0.05, 100, 1);
    CHECK(bad.diagnostics.has_flag("rule-inconsistent"));
    CHECK(bad.lower == doctest::Approx(0.6 - 1.6448536269514727 / std::sqrt(10.0)));
  }

  TEST_CASE("report round trip") {
    const auto report = sample_report();
    for (auto fmt : {ReportFormat::Csv, ReportFormat::Json}) {
      const auto back = parse_report(render_report(report, fmt), fmt);
      REQUIRE(back.rows.size() == report.rows.size());
      for (std::size_t i = 0; i < report.rows.size(); ++i) {
        CHECK(back.rows[i].mu == doctest::Approx(report.rows[i].mu).epsilon(1e-5));
        CHECK(back.rows[i].method == report.rows[i].method);
        CHECK(back.rows[i].L_pct == doctest::Approx(report.rows[i].L_pct).epsilon(1e-5));
        CHECK(back.rows[i].U_se == doctest::Approx(report.rows[i].U_se).epsilon(1e-5));
        CHECK(back.rows[i].mean_length == doctest::Approx(report.rows[i].mean_length).epsilon(1e-5));
        CHECK(back.rows[i].mean_T == doctest::Approx(report.rows[i].mean_T).epsilon(1e-5));
      }
    }
    CHECK(render_report(CoverageReport{}, ReportFormat::Csv) == "mu,method,L_pct,U_pct,L_se,U_se,mean_length,mean_T\n");
    CHECK(parse_report(render_report(CoverageReport{}, ReportFormat::Json), ReportFormat::Json).rows.empty());
  }

  TEST_CASE("coverage run") {
    const auto cfg = parse_config(kSmall);
    const auto report = run_coverage(cfg, 1);
    REQUIRE(report.rows.size() == 10);
    for (const auto& row : report.rows) {
      CHECK(row.n_valid == 400);
      const double pl = row.L_pct / 100.0;
      CHECK(row.L_se == doctest::Approx(100.0 * std::sqrt(pl * (1.0 - pl) / row.n_valid)).epsilon(1e-12));
      if (row.method == Method::WholeLine) {
        CHECK(row.L_pct == 0.0);
        CHECK(row.U_pct == 0.0);
        CHECK(std::isinf(row.mean_length));
      }
    }
    CHECK(report.total_failures() == 0);
    // Every method sees the same stopped samples.
    CHECK(report.rows[0].mean_T == report.rows[4].mean_T);

    const auto parallel = run_coverage(cfg, 3);
    CHECK(render_report(parallel, ReportFormat::Csv) == render_report(report, ReportFormat::Csv));
  }

  TEST_CASE("quantile table for a point-mass population") {
    auto cfg = parse_config(R"({"scenario": {"g": "quadratic", "a": 4.5, "n0": 75, "n1": 15},
                                "population": {"variant": "normal", "sigma": 0},
                                "mu_list": [0.0], "n_sims": 50})");
    const auto table = run_quantile_table(cfg, 1);
    bool saw_r0 = false;
    for (const auto& row : table.rows) {
      if (row.statistic != "R0") continue;
      saw_r0 = true;
      for (double q : row.q) CHECK(q == 0.0);
    }
    CHECK(saw_r0);
  }

  TEST_CASE("quantile table against the reference simulation") {
    // Oracle: tests/oracles/monte_carlo.py, q_0.025 of R0 = -2.0359 at mu = 0.
    auto cfg = parse_config(R"({"scenario": {"g": "quadratic", "a": 4.5, "n0": 75, "n1": 15},
                                "population": {"variant": "normal"},
                                "mu_list": [0.0], "n_sims": 20000, "seed": 5})");
    const auto table = run_quantile_table(cfg, 1);
    for (const auto& row : table.rows) {
      if (row.statistic == "R0") {
        CHECK(std::fabs(row.q[0] - (-2.035938)) < 0.07);
        // Even rule at mu = 0: the median of R0 is zero by symmetry.
        CHECK(std::fabs(row.q[4]) < 0.05);
      }
      if (row.statistic == "R1") {
        // Monotone across levels.
        for (std::size_t k = 1; k < row.q.size(); ++k) CHECK(row.q[k] >= row.q[k - 1]);
      }
    }
    const auto csv = render_quantile_table(table, ReportFormat::Csv);
    CHECK(csv.rfind("delta,mu,statistic,2.5,5,10,20,50,80,90,95,97.5\n", 0) == 0);
  }

  TEST_CASE("simulated trials") {
    const auto trials = simulate_trials(resolve_scenario("rst"), Population::normal(3.0, 1.0), 1, 20);
    REQUIRE(trials.size() == 20);
    for (const auto& t : trials) {
      CHECK(t.T == 15);
      CHECK(t.hit_boundary);
      CHECK(t.sum == doctest::Approx(t.mean * t.T));
    }
  }
}
