// SPDX-License-Identifier: Apache-2.0
// Acceptance checks. Usage: acceptance <criterion 1-8> [--jobs N]
// Prints one PASS/FAIL line per checked quantity; exit status 1 if any fail.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "seqinfer/config.hpp"
#include "seqinfer/differentiation.hpp"
#include "seqinfer/harness.hpp"
#include "seqinfer/intervals.hpp"
#include "seqinfer/numerics.hpp"
#include "seqinfer/report.hpp"

using namespace seqinfer;

namespace {

// Monte Carlo error of the fast profile (2000 sims) relative to 10^4.
constexpr double kFastWiden = 2.24;

int g_jobs = 1;
int g_failures = 0;

void report(bool ok, const std::string& what) {
  std::printf("%s %s\n", ok ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void near(const std::string& what, double got, double target, double tol) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s = %.4f (target %.4f +- %.4f)", what.c_str(), got, target, tol);
  report(std::fabs(got - target) <= tol, buf);
}

void relative(const std::string& what, double got, double target, double rel) {
  char buf[256];
  const double err = std::fabs(got - target) / std::max(std::fabs(target), 1e-300);
  std::snprintf(buf, sizeof buf, "%s = %.17g (reference %.17g, rel err %.2e <= %.0e)", what.c_str(), got, target,
                err, rel);
  report(err <= rel, buf);
}

ExperimentConfig load(const std::string& name) { return load_config(std::filesystem::path(SEQINFER_CONFIG_DIR) / name); }

ExperimentConfig cell(const std::string& file, std::vector<double> mu, const std::vector<std::string>& methods,
                      bool fast = false) {
  auto cfg = load(file);
  cfg.mu_list = std::move(mu);
  cfg.methods.clear();
  for (const auto& m : methods) cfg.methods.push_back(*parse_method(m));
  if (fast) apply_fast_profile(cfg);
  cfg.validate();
  return cfg;
}

const CoverageRow& row(const CoverageReport& r, double mu, const std::string& method) {
  for (const auto& x : r.rows)
    if (std::fabs(x.mu - mu) < 1e-12 && method_name(x.method) == method) return x;
  std::fprintf(stderr, "missing row mu=%g %s\n", mu, method.c_str());
  std::exit(2);
}

std::string tag(const char* table, const std::string& method, double mu, const char* side, bool fast) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "[%s] %s mu=%.1f %s%s", table, method.c_str(), mu, side, fast ? " (fast)" : "");
  return buf;
}

void check_cell(const char* table, const CoverageReport& r, double mu, const std::string& method, double L,
                double U, double tol, bool fast) {
  const auto& x = row(r, mu, method);
  const double t = fast ? tol * kFastWiden : tol;
  if (!std::isnan(L)) near(tag(table, method, mu, "L%", fast), x.L_pct, L, t);
  if (!std::isnan(U)) near(tag(table, method, mu, "U%", fast), x.U_pct, U, t);
}

constexpr double kSkip = std::numeric_limits<double>::quiet_NaN();

// Table 2: normal population, known variance.
void criterion1() {
  const auto normal = run_coverage(cell("table2_normal.json", {0.2}, {"normal_r0", "normal_r1"}), g_jobs);
  check_cell("normal", normal, 0.2, "normal_r0", 11.47, 4.77, 0.8, false);
  check_cell("normal", normal, 0.2, "normal_r1", 5.86, kSkip, 0.8, false);

  const auto boot = run_coverage(cell("table2_normal.json", {0.4}, {"boot_r1"}), g_jobs);
  check_cell("normal", boot, 0.4, "boot_r1", 5.64, 4.54, 1.2, false);

  const auto hybrid = run_coverage(cell("table2_normal.json", {0.4}, {"hybrid"}, true), g_jobs);
  check_cell("normal", hybrid, 0.4, "hybrid", 5.26, 5.14, 1.0, true);

  const auto exact = run_coverage(cell("table2_normal.json", {0.0}, {"exact"}, true), g_jobs);
  check_cell("normal", exact, 0.0, "exact", 5.29, 5.19, 1.0, true);
}

// Table 3: normal/exponential mixture, known variance.
void criterion2() {
  const auto normal = run_coverage(cell("table3_mixture.json", {0.2}, {"normal_r0"}), g_jobs);
  check_cell("mixture", normal, 0.2, "normal_r0", 13.70, kSkip, 1.0, false);

  const auto resampled = run_coverage(cell("table3_mixture.json", {0.2}, {"hybrid", "exact"}, true), g_jobs);
  check_cell("mixture", resampled, 0.2, "hybrid", 4.95, 6.17, 1.2, true);
  check_cell("mixture", resampled, 0.2, "exact", 7.43, kSkip, 1.0, true);
}

// Table 4: studentized rule, estimated variance.
void criterion3() {
  const auto normal = run_coverage(cell("table4_normal.json", {0.2}, {"t_r0", "t_r1"}), g_jobs);
  check_cell("studentized normal", normal, 0.2, "t_r0", 12.89, kSkip, 1.0, false);
  check_cell("studentized normal", normal, 0.2, "t_r1", 7.56, kSkip, 1.0, false);

  const auto mixture = run_coverage(cell("table4_mixture.json", {1.0}, {"t_r0", "boot_r1"}), g_jobs);
  check_cell("studentized mixture", mixture, 1.0, "t_r0", kSkip, 10.66, 1.2, false);
  check_cell("studentized mixture", mixture, 1.0, "boot_r1", 5.25, 5.62, 1.5, false);
}

// Quantiles of the roots under the smoothed-absolute rule.
void criterion4() {
  const auto cfg = load("table1_quantiles.json");
  const auto table = run_quantile_table(cfg, g_jobs);
  // Reference q_2.5 values from tests/oracles/monte_carlo.py (4e5 trials per mu).
  const std::map<std::string, std::vector<double>> golden{
      {"R0", {-2.2225, -2.0448, -1.8512, -1.7808, -1.7779}},
      {"R1", {-1.9998, -1.984, -1.9611, -1.9797, -1.9865}},
      {"R", {-1.9516, -1.9803, -1.9493, -1.9412, -1.944}},
  };
  std::map<std::string, std::vector<double>> q025;
  for (const auto& r : table.rows) q025[r.statistic].push_back(r.q[0]);

  auto range = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
  };
  char buf[256];
  const double r0 = range(q025["R0"]);
  for (const char* s : {"R", "R1"}) {
    std::snprintf(buf, sizeof buf, "[quantiles] range over mu of q2.5(%s) = %.4f < range of q2.5(R0) = %.4f", s,
                  range(q025[s]), r0);
    report(range(q025[s]) < r0, buf);
  }
  double worst = 0.0;
  for (double q : q025["R"]) worst = std::max(worst, std::fabs(q + 1.96));
  std::snprintf(buf, sizeof buf, "[quantiles] max over mu |q2.5(R) + 1.96| = %.4f < 0.15", worst);
  report(worst < 0.15, buf);

  const double mus[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (const auto& [stat, ref] : golden) {
    for (std::size_t k = 0; k < ref.size(); ++k) {
      std::snprintf(buf, sizeof buf, "[quantiles] q2.5(%s) mu=%.2f", stat.c_str(), mus[k]);
      near(buf, q025[stat][k], ref[k], 0.12);
    }
  }
}

// Optional stopping bias of the naive root, and its first-order correction.
void criterion5() {
  const auto rule = presets::repeated_significance_test();
  const auto h = SmoothFunctional::coordinate(1);
  const double mu = 0.5;
  const int n = 100000;
  double s0 = 0.0, s00 = 0.0, s1 = 0.0, s11 = 0.0;
  StoppedSample sample;
  for (int r = 0; r < n; ++r) {
    RandomStream stream(20240612, static_cast<std::uint64_t>(r));
    run_trial_into(rule, Population::normal(mu, 1.0), ObservationMap::identity(), stream, sample);
    const double r0 = eval_R0(sample, h, mu, VarianceMode::KnownUnit);
    const double r1 = eval_R1(sample, rule, h, mu, VarianceMode::KnownUnit);
    s0 += r0;
    s00 += r0 * r0;
    s1 += r1;
    s11 += r1 * r1;
  }
  auto se = [n](double s, double ss) { return std::sqrt((ss / n - (s / n) * (s / n)) / n); };
  const double m0 = s0 / n, se0 = se(s0, s00);
  const double m1 = s1 / n, se1 = se(s1, s11);

  char buf[256];
  std::snprintf(buf, sizeof buf, "[bias] mean sqrt(T)(Xbar_T - mu) = %.4f (SE %.4f) > 0", m0, se0);
  report(m0 > 0.0, buf);
  // Reference: tests/oracles/monte_carlo.py, 2e6 trials, SE 0.00068.
  const double oracle = 0.241758;
  const double tol = 3.0 * std::hypot(se0, 0.00068);
  near("[bias] mean of R0 vs reference simulation", m0, oracle, tol);

  const double mu_arr[] = {mu};
  const double approx = std::sqrt(kappa(rule, mu_arr) / rule.a()) * bias_b(rule, mu_arr, Matrix::identity(1), h);
  std::snprintf(buf, sizeof buf, "[bias] (kappa/a)^(1/2) b = %.4f within 50%% of the simulated bias %.4f (rel %.3f)",
                approx, m0, std::fabs(approx - m0) / m0);
  report(std::fabs(approx - m0) <= 0.5 * m0, buf);

  // |mean R1| < |mean R0| by three standard errors of the two means.
  std::snprintf(buf, sizeof buf, "[bias] |mean R1| = %.4f < |mean R0| = %.4f at 3 SE (SE %.4f, %.4f)", std::fabs(m1),
                std::fabs(m0), se1, se0);
  report(std::fabs(m0) - std::fabs(m1) > 3.0 * std::hypot(se0, se1), buf);
}

// Exact method under its own correctly specified family.
void criterion6() {
  auto cfg = cell("table2_normal.json", {}, {"exact"}, true);
  cfg.mu_list = load("table2_normal.json").mu_list;
  const auto r = run_coverage(cfg, g_jobs);
  for (double mu : cfg.mu_list) check_cell("normal", r, mu, "exact", 5.0, 5.0, 1.0, true);
}

// Byte-identical reruns, and seed changes that stay within tolerance.
void criterion7() {
  auto cfg = cell("table2_normal.json", {0.2, 0.4}, {"normal_r0", "normal_r1", "boot_r1"});
  const auto first = render_report(run_coverage(cfg, g_jobs), ReportFormat::Csv);
  const auto again = render_report(run_coverage(cfg, g_jobs + 1), ReportFormat::Csv);
  report(first == again, "[repro] table 2 normal and bootstrap cells: same seed, different jobs, identical CSV");

  auto small = cell("table3_mixture.json", {0.2}, {"hybrid", "exact"}, true);
  small.n_sims = 100;
  const auto a = render_report(run_coverage(small, g_jobs), ReportFormat::Json);
  const auto b = render_report(run_coverage(small, 1), ReportFormat::Json);
  report(a == b, "[repro] hybrid and exact cells: identical JSON on rerun");

  auto quant = load("table1_quantiles.json");
  quant.n_sims = 2000;
  report(render_quantile_table(run_quantile_table(quant, g_jobs), ReportFormat::Csv) ==
             render_quantile_table(run_quantile_table(quant, 1), ReportFormat::Csv),
         "[repro] quantile table: identical CSV on rerun");

  cfg.seed += 1000;
  const auto reseeded = run_coverage(cfg, g_jobs);
  report(render_report(reseeded, ReportFormat::Csv) != first, "[repro] a different seed changes the report");
  check_cell("normal, reseeded", reseeded, 0.2, "normal_r0", 11.47, 4.77, 0.8, false);
  check_cell("normal, reseeded", reseeded, 0.2, "normal_r1", 5.86, kSkip, 0.8, false);
  check_cell("normal, reseeded", reseeded, 0.4, "boot_r1", 5.64, 4.54, 1.2, false);
}

// Closed forms against high-precision references (tests/oracles/closed_forms.py).
void criterion8() {
  const auto rule = presets::repeated_significance_test();
  const auto h = SmoothFunctional::coordinate(1);
  const double e = 1e-12;

  relative("z_0.975", normal_quantile(0.975), 1.9599639845400542355, e);
  relative("z_0.95", normal_quantile(0.95), 1.6448536269514727149, e);
  relative("z_0.999", normal_quantile(0.999), 3.0902323061678135415, e);
  relative("z_1e-10", normal_quantile(1e-10), -6.3613409024040562047, e);
  relative("t_0.975(30)", t_quantile(0.975, 30), 2.04227245630123831, e);
  relative("t_0.95(15)", t_quantile(0.95, 15), 1.7530503556925735077, e);
  relative("t_0.05(25)", t_quantile(0.05, 25), -1.7081407612518992711, e);
  relative("t_0.9(3)", t_quantile(0.9, 3), 1.6377443536962101055, e);

  const double m0[] = {0.0}, m5[] = {0.5}, m1[] = {1.0};
  relative("kappa(0)", kappa(rule, m0), 0.06, e);
  relative("kappa(0.5)", kappa(rule, m5), 0.125, e);
  relative("kappa(1)", kappa(rule, m1), 0.3, e);
  relative("b(0.5)", bias_b(rule, m5, Matrix::identity(1), h), 2.0, e);
  const double p[] = {0.5, 1.25};
  const auto gk = grad_kappa_sqrt(presets::studentized_repeated_significance_test(), p);
  relative("grad kappa^(1/2) studentized [0]", gk.value[0], 0.8838834764831844055, e);
  relative("grad kappa^(1/2) studentized [1]", gk.value[1], -0.1767766952966368811, e);

  const std::vector<double> xs(25, 0.5);
  const auto s = StoppedSample::from_scalars(ObservationMap::identity(), xs);
  relative("R1(theta=0.5)", eval_R1(s, rule, h, 0.5, VarianceMode::KnownUnit), -0.4, e);
  relative("R1(theta=0)", eval_R1(s, rule, h, 0.0, VarianceMode::KnownUnit), 2.1, e);
  relative("R(mu=0)", eval_R(s, rule, 0.0), 1.9444444444444444444, e);
  relative("R(mu=0.5)", eval_R(s, rule, 0.5), -0.37037037037037037037, e);
  relative("R0(theta=0)", eval_R0(s, h, 0.0, VarianceMode::KnownUnit), 2.5, e);

  const auto i0 = interval_normal_R0(s, h, 0.05, VarianceMode::KnownUnit);
  const auto i1 = interval_normal_R1(s, rule, h, 0.05, VarianceMode::KnownUnit);
  const auto ir = interval_normal_R(s, rule, 0.05);
  relative("Normal(R0) lower", i0.lower, 0.17102927460970545703, e);
  relative("Normal(R0) upper", i0.upper, 0.82897072539029454297, e);
  relative("Normal(R1) lower", i1.lower, 0.091029274609705457027, e);
  relative("Normal(R1) upper", i1.upper, 0.74897072539029454297, e);
  relative("Normal(R) lower", ir.lower, 0.064711616578481893589, e);
  relative("Normal(R) upper", ir.upper, 0.77528838342151810641, e);

  const std::vector<double> v{3.0, 1.0, 2.0, 4.0};
  relative("empirical quantile p=0.5 of {1,2,3,4}", empirical_quantile(v, 0.5), 2.5, e);
  relative("empirical quantile p=0.1 of {1,2,3,4}", empirical_quantile(v, 0.1), 1.3, e);
  std::vector<double> hundred(100);
  for (int i = 0; i < 100; ++i) hundred[static_cast<std::size_t>(i)] = 100.0 - i;
  const auto [lo, hi] = quantile_pair_inplace(hundred, 0.25);
  relative("quantile pair lower on 1..100", lo, 25.75, e);
  relative("quantile pair upper on 1..100", hi, 75.25, e);

  // Analytic boundary gradients against central differences.
  RandomStream rs(8, 0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double eta = 2.0 * rs.uniform() - 1.0;
    const double x[] = {4.0 * rs.uniform() - 2.0};
    const double y[] = {eta, eta * eta + 0.2 + rs.uniform()};
    for (const auto& g : {BoundaryFunction::quadratic(), BoundaryFunction::smoothed_absolute(0.5),
                          BoundaryFunction::studentized()}) {
      const std::span<const double> at = g.dim() == 1 ? std::span<const double>(x) : std::span<const double>(y);
      if (g.name() == "smoothed_absolute" && std::fabs(std::fabs(x[0]) - 0.5) < 1e-3) continue;
      std::vector<double> a(at.size()), fd(at.size());
      g.gradient(at, a);
      central_gradient([&](std::span<const double> z) { return g(z); }, at, fd);
      for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::fabs(a[i] - fd[i]) / std::max(1.0, std::fabs(a[i])));
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "boundary gradients vs central differences: worst rel err %.2e <= 1e-6", worst);
  report(worst <= 1e-6, buf);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <1-8> [--jobs N]\n");
    return 2;
  }
  const int which = std::atoi(argv[1]);
  const unsigned hw = std::thread::hardware_concurrency();
  g_jobs = hw == 0 ? 1 : static_cast<int>(hw);
  for (int i = 2; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--jobs") g_jobs = std::max(1, std::atoi(argv[i + 1]));

  switch (which) {
    case 1: criterion1(); break;
    case 2: criterion2(); break;
    case 3: criterion3(); break;
    case 4: criterion4(); break;
    case 5: criterion5(); break;
    case 6: criterion6(); break;
    case 7: criterion7(); break;
    case 8: criterion8(); break;
    default:
      std::fprintf(stderr, "unknown criterion %d\n", which);
      return 2;
  }
  std::printf("criterion %d: %s (%d failed)\n", which, g_failures == 0 ? "PASS" : "FAIL", g_failures);
  return g_failures == 0 ? 0 : 1;
}
