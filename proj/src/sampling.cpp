// SPDX-License-Identifier: Apache-2.0
#include "seqinfer/sampling.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "seqinfer/numerics.hpp"

namespace seqinfer {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

const std::vector<double>& support_of(const std::shared_ptr<const std::vector<double>>& p) {
  if (!p || p->empty()) throw std::invalid_argument("empty resampling support");
  return *p;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t derive_stream_id(std::uint64_t parent, std::uint64_t index) {
  return splitmix64(parent ^ splitmix64(index ^ 0x5851F42D4C957F2Dull));
}

RandomBlock RandomStream::block_at(std::uint64_t position) const {
  const auto out = philox4x32(
      {static_cast<std::uint32_t>(position), static_cast<std::uint32_t>(position >> 32),
       static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)},
      {static_cast<std::uint32_t>(master_seed_), static_cast<std::uint32_t>(master_seed_ >> 32)});
  return {static_cast<std::uint64_t>(out[0]) | (static_cast<std::uint64_t>(out[1]) << 32),
          static_cast<std::uint64_t>(out[2]) | (static_cast<std::uint64_t>(out[3]) << 32)};
}

RandomBlock RandomStream::next_block() { return block_at(position_++); }

Population Population::normal(double mu, double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("normal population: sigma must be >= 0");
  return Population(NormalKnownVar{mu, sigma});
}

Population Population::mixture(double mu) { return Population(NormalExpMixture{mu}); }

Population Population::empirical(std::vector<double> data) {
  return Population(Empirical{std::make_shared<const std::vector<double>>(std::move(data))});
}

Population Population::shifted_empirical(std::vector<double> residuals, double mu) {
  if (!residuals.empty()) {
    const double mean = std::accumulate(residuals.begin(), residuals.end(), 0.0) /
                        static_cast<double>(residuals.size());
    for (double& r : residuals) r -= mean;
  }
  return Population(
      ShiftedEmpirical{std::make_shared<const std::vector<double>>(std::move(residuals)), mu});
}

double Population::noise(const RandomBlock& block) const {
  struct Visitor {
    const RandomBlock& b;
    double operator()(const NormalKnownVar& p) const {
      return p.sigma * normal_quantile(open_unit(b.w0));
    }
    double operator()(const NormalExpMixture&) const {
      if (open_unit(b.w0) < kMixtureNormalWeight) return normal_quantile(open_unit(b.w1));
      return -std::log(half_open_unit(b.w1)) - 1.0;
    }
    double operator()(const Empirical& p) const {
      const auto& data = support_of(p.data);
      return data[bounded_index(b.w0, data.size())];
    }
    double operator()(const ShiftedEmpirical& p) const {
      const auto& res = support_of(p.residuals);
      return res[bounded_index(b.w0, res.size())];
    }
  };
  return std::visit(Visitor{block}, variant_);
}

double Population::location() const {
  struct Visitor {
    double operator()(const NormalKnownVar& p) const { return p.mu; }
    double operator()(const NormalExpMixture& p) const { return p.mu; }
    double operator()(const Empirical&) const { return 0.0; }
    double operator()(const ShiftedEmpirical& p) const { return p.mu; }
  };
  return std::visit(Visitor{}, variant_);
}

Population Population::relocated(double mu) const {
  struct Visitor {
    double mu;
    Variant operator()(NormalKnownVar p) const { p.mu = mu; return p; }
    Variant operator()(NormalExpMixture p) const { p.mu = mu; return p; }
    Variant operator()(const Empirical&) const {
      throw std::invalid_argument("empirical population has no location parameter");
    }
    Variant operator()(ShiftedEmpirical p) const { p.mu = mu; return p; }
  };
  return Population(std::visit(Visitor{mu}, variant_));
}

double draw(const Population& pop, RandomStream& stream) { return pop.draw(stream); }

std::vector<std::vector<double>> lift_sequence(const ObservationMap& map,
                                               std::span<const double> xs) {
  std::vector<std::vector<double>> out;
  out.reserve(xs.size());
  for (double x : xs) {
    std::vector<double> v(static_cast<std::size_t>(map.dim()));
    map.lift(x, v);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace seqinfer
