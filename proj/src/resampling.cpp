// SPDX-License-Identifier: Apache-2.0
#include "seqinfer/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "seqinfer/numerics.hpp"

namespace seqinfer {

void RootSpec::validate() const {
  if (map.dim() != rule.dim()) throw std::invalid_argument("root spec: map and rule dimensions differ");
  if (h.dim() != map.dim()) throw std::invalid_argument("root spec: functional and map dimensions differ");
  if (kind == RootKind::RRenorm && (variance != VarianceMode::KnownUnit || map.dim() != 1)) {
    throw std::invalid_argument("root spec: renormalized root needs d = 1 and known unit variance");
  }
}

ResamplingFamily ResamplingFamily::bootstrap(std::span<const double> scalars) {
  return ResamplingFamily(Kind::Bootstrap,
                          Population::empirical(std::vector<double>(scalars.begin(), scalars.end())));
}

ResamplingFamily ResamplingFamily::hybrid_shift(std::span<const double> scalars, ResidualScale scale) {
  std::vector<double> residuals(scalars.begin(), scalars.end());
  if (scale == ResidualScale::UnitVariance && !residuals.empty()) {
    const double n = static_cast<double>(residuals.size());
    const double mean = std::accumulate(residuals.begin(), residuals.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : residuals) ss += (x - mean) * (x - mean);
    // A constant sample leaves a point mass; there is nothing to rescale.
    const double sd = std::sqrt(ss / n);
    for (double& x : residuals) x = sd > 0.0 ? (x - mean) / sd : 0.0;
  }
  return ResamplingFamily(Kind::HybridShift, Population::shifted_empirical(std::move(residuals), 0.0));
}

ResamplingFamily ResamplingFamily::parametric(Population base) {
  if (std::holds_alternative<Empirical>(base.variant())) {
    throw std::invalid_argument("parametric family needs a population with a location parameter");
  }
  return ResamplingFamily(Kind::Parametric, base.relocated(0.0));
}

Population ResamplingFamily::at(double theta) const {
  if (kind_ == Kind::Bootstrap) return law_;
  return law_.relocated(theta);
}

NoiseBank::NoiseBank(Population law, int rows, int max_len, RandomStream stream)
    : law_(std::move(law)), max_len_(max_len), stream_(stream) {
  if (rows < 1) throw std::invalid_argument("resampling: B must be >= 1");
  if (max_len < 1) throw std::invalid_argument("resampling: row length must be >= 1");
  rows_.resize(static_cast<std::size_t>(rows));
}

void NoiseBank::extend(int row, int len) {
  if (len > max_len_) throw std::out_of_range("noise bank: row exhausted");
  auto& r = rows_[static_cast<std::size_t>(row)];
  const auto target = static_cast<std::size_t>(
      std::min(max_len_, std::max({len, 2 * static_cast<int>(r.size()), 16})));
  // Block k of the row's stream is the k-th draw, so lazy growth does not
  // change any value.
  const RandomStream rs = stream_.child(static_cast<std::uint64_t>(row));
  r.reserve(target);
  for (std::size_t k = r.size(); k < target; ++k) r.push_back(law_.noise(rs.block_at(k)));
}

void NoiseBank::fill_all() {
  for (int b = 0; b < rows(); ++b) {
    if (rows_[static_cast<std::size_t>(b)].size() < static_cast<std::size_t>(max_len_)) extend(b, max_len_);
  }
}

RootSimulator::RootSimulator(ResamplingFamily family, RootSpec spec, int B, RandomStream stream)
    : RootSimulator(family, spec,
                    std::make_shared<NoiseBank>(family.noise_law(), B, spec.rule.n0(), stream)) {}

RootSimulator::RootSimulator(ResamplingFamily family, RootSpec spec, std::shared_ptr<NoiseBank> bank)
    : family_(std::move(family)), spec_(std::move(spec)), bank_(std::move(bank)) {
  spec_.validate();
  if (!bank_) throw std::invalid_argument("resampling: missing noise bank");
  if (bank_->max_len() < spec_.rule.n0()) throw std::invalid_argument("resampling: bank rows shorter than n0");
  if (family_.kind() == ResamplingFamily::Kind::Bootstrap) {
    const auto& src = std::get<Empirical>(family_.noise_law().variant()).data;
    if (!src || src->empty()) throw std::invalid_argument("empty resampling support");
    const auto lifted = StoppedSample::from_scalars(spec_.map, *src);
    bootstrap_center_ = spec_.h(lifted.mean);
  }
  values_.resize(static_cast<std::size_t>(bank_->rows()));
}

double RootSimulator::evaluation_point(double theta) const {
  return family_.kind() == ResamplingFamily::Kind::Bootstrap ? bootstrap_center_ : theta;
}

std::span<double> RootSimulator::roots(double theta) {
  const double loc = family_.location_at(theta);
  const double center = evaluation_point(theta);
  const int d = spec_.map.dim();
  std::array<double, kMaxDim> lifted{};
  std::span<double> view(lifted.data(), static_cast<std::size_t>(d));
  StoppingMonitor monitor(spec_.rule);

  for (int b = 0; b < bank_->rows(); ++b) {
    scratch_.clear(d);
    monitor.reset();
    for (int i = 0;; ++i) {
      const double x = loc + bank_->value(b, i);
      spec_.map.lift(x, view);
      scratch_.push(x, view);
      if (monitor.observe(view)) break;
    }
    scratch_.finish();
    values_[static_cast<std::size_t>(b)] =
        affine_root(spec_.kind, scratch_, spec_.rule, spec_.h, spec_.variance).value(center);
  }
  return values_;
}

std::vector<double> RootSimulator::sorted_roots(double theta) {
  auto r = roots(theta);
  std::vector<double> out(r.begin(), r.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<double, double> RootSimulator::quantiles(double theta, double alpha) {
  return quantile_pair_inplace(roots(theta), alpha);
}

std::vector<double> simulate_root_distribution(const ResamplingFamily& family, double theta,
                                               const RootSpec& spec, int B, RandomStream stream) {
  RootSimulator sim(family, spec, B, stream);
  return sim.sorted_roots(theta);
}

std::pair<double, double> quantile_pair(std::span<const double> sorted_values, double alpha) {
  if (sorted_values.empty()) throw std::invalid_argument("quantile_pair: empty list");
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::domain_error("quantile_pair: alpha must lie in (0, 0.5)");
  return {sorted_quantile(sorted_values, alpha), sorted_quantile(sorted_values, 1.0 - alpha)};
}

}  // namespace seqinfer
