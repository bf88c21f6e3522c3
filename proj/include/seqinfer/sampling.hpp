// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace seqinfer {

/// Philox4x32-10 block cipher applied to a 128-bit counter under a 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Mixes a parent stream id with a child index into a new stream id.
std::uint64_t derive_stream_id(std::uint64_t parent, std::uint64_t index);

/// One 128-bit output block, split into two 64-bit words.
struct RandomBlock {
  std::uint64_t w0;
  std::uint64_t w1;
};

/// Uniform on the open interval (0, 1) from the top 52 bits of a word. With
/// 53 bits the largest value would round up to 1.
inline double open_unit(std::uint64_t word) {
  return (static_cast<double>(word >> 12) + 0.5) * 0x1.0p-52;
}

/// Uniform on (0, 1] from the top 53 bits of a word.
inline double half_open_unit(std::uint64_t word) {
  return (static_cast<double>(word >> 11) + 1.0) * 0x1.0p-53;
}

/// Uniform index in [0, n) via a 64x64 multiply-high.
inline std::size_t bounded_index(std::uint64_t word, std::size_t n) {
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(word) * n) >> 64);
}

/// Counter-based random stream. The output at position k is a pure function
/// of (master_seed, stream_id, k), so streams can be created in any order and
/// on any thread without changing what they produce.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : master_seed_(master_seed), stream_id_(stream_id) {}

  RandomBlock next_block();
  /// Block at an absolute position; does not move the stream.
  RandomBlock block_at(std::uint64_t position) const;

  double uniform() { return open_unit(next_block().w0); }

  /// Independent stream sharing the master seed.
  RandomStream child(std::uint64_t index) const {
    return RandomStream(master_seed_, derive_stream_id(stream_id_, index));
  }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t position() const { return position_; }
  void seek(std::uint64_t position) { position_ = position; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t position_ = 0;
};

inline RandomStream make_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return RandomStream(master_seed, stream_id);
}

struct NormalKnownVar {
  double mu = 0.0;
  double sigma = 1.0;
};

/// N(mu, 1) with probability 0.2, otherwise mu + (Exp(1) - 1).
struct NormalExpMixture {
  double mu = 0.0;
};

struct Empirical {
  std::shared_ptr<const std::vector<double>> data;
};

/// Residuals are centered at construction, so draws have mean exactly mu.
struct ShiftedEmpirical {
  std::shared_ptr<const std::vector<double>> residuals;
  double mu = 0.0;
};

/// A sampling law. Every variant is written as location + noise, where the
/// noise law does not depend on the location; a draw consumes exactly one
/// RandomBlock.
class Population {
 public:
  using Variant = std::variant<NormalKnownVar, NormalExpMixture, Empirical, ShiftedEmpirical>;

  static constexpr double kMixtureNormalWeight = 0.2;

  static Population normal(double mu, double sigma);
  static Population mixture(double mu);
  static Population empirical(std::vector<double> data);
  static Population shifted_empirical(std::vector<double> residuals, double mu);

  double draw(RandomStream& stream) const { return location() + noise(stream.next_block()); }
  double noise(const RandomBlock& block) const;
  /// Location parameter; 0 for Empirical.
  double location() const;
  /// Same noise law at a new location. Empirical has no location parameter.
  Population relocated(double mu) const;

  const Variant& variant() const { return variant_; }

 private:
  explicit Population(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

double draw(const Population& pop, RandomStream& stream);

/// Maps a scalar observation to the d-vector the stopping rule watches.
class ObservationMap {
 public:
  enum class Kind { Identity, Square };

  static ObservationMap identity() { return ObservationMap(Kind::Identity); }
  /// x -> (x, x^2), used when the variance is estimated alongside the mean.
  static ObservationMap square() { return ObservationMap(Kind::Square); }

  Kind kind() const { return kind_; }
  int dim() const { return kind_ == Kind::Identity ? 1 : 2; }

  void lift(double x, std::span<double> out) const {
    out[0] = x;
    if (kind_ == Kind::Square) out[1] = x * x;
  }

 private:
  explicit ObservationMap(Kind k) : kind_(k) {}
  Kind kind_;
};

std::vector<std::vector<double>> lift_sequence(const ObservationMap& map,
                                               std::span<const double> xs);

}  // namespace seqinfer
