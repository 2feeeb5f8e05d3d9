#pragma once

// Counter-based random numbers. Every draw is a pure function of
// (seed, stream, index), so experiments can be split across workers and
// replayed bit-exactly.

#include <array>
#include <cstdint>
#include <limits>

namespace entlab::rng {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
// as easy as 1, 2, 3").
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

// Order-sensitive seed derivation, e.g. mix_seed(mix_seed(master, n), trial).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// Uniform double in [0, 1) from the top 53 bits.
inline double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

__extension__ using Uint128 = unsigned __int128;

// Uniform integer in [0, bound) by multiply-shift; bias is below 2^-64 * bound.
inline std::uint64_t bounded_from_bits(std::uint64_t bits, std::uint64_t bound) {
  return static_cast<std::uint64_t>((static_cast<Uint128>(bits) * bound) >> 64);
}

// A keyed family of 128-bit blocks addressed by a 64-bit index.
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_id_(stream_id) {}

  PhiloxCounter block_at(std::uint64_t index) const {
    return philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                       static_cast<std::uint32_t>(stream_id_),
                       static_cast<std::uint32_t>(stream_id_ >> 32)},
                      key_);
  }

  // First and second 64-bit halves of block_at(index).
  std::uint64_t bits_at(std::uint64_t index) const {
    auto b = block_at(index);
    return (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
  }
  std::uint64_t second_bits_at(std::uint64_t index) const {
    auto b = block_at(index);
    return (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
  }

  double unit_at(std::uint64_t index) const { return unit_from_bits(bits_at(index)); }

 private:
  PhiloxKey key_;
  std::uint64_t stream_id_;
};

// Sequential view over a CounterStream that satisfies UniformRandomBitGenerator,
// for use with <random> distributions.
class SequentialEngine {
 public:
  using result_type = std::uint64_t;

  explicit SequentialEngine(std::uint64_t seed, std::uint64_t stream_id = 0,
                            std::uint64_t first_index = 0)
      : stream_(seed, stream_id), next_(first_index) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return stream_.bits_at(next_++); }

  // Uniform in (0, 1]; safe as an argument to log().
  double open_unit() { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53; }
  double unit() { return unit_from_bits((*this)()); }

  std::uint64_t position() const { return next_; }

 private:
  CounterStream stream_;
  std::uint64_t next_;
};

}  // namespace entlab::rng
