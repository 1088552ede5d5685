#pragma once

#include <cstdint>

namespace gcruin::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// Seed used whenever the caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 20190501ULL;

/// SplitMix64 output function.
constexpr std::uint64_t finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent child seed from (seed, key).
constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t key) noexcept {
  return finalize(finalize(seed + kGolden) ^ finalize(key * kGolden + 0xD1B54A32D192ED03ULL));
}

/// Maps 64 random bits to the open interval (0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Named sub-streams of a path's randomness.
enum class Stream : std::uint64_t {
  step = 1,    // step variables U_k
  jump = 2,    // Kendall uniform catalyzers xi_k
  pareto = 3,  // Kendall Pareto catalyzers Pi_k
  aux = 4,     // generic/Kingman auxiliary draws
  time = 5,    // claim arrival times
  count = 6,   // Poisson claim counts
};

/// One named stream of a CounterStream with its key precomputed.
class SubStream {
 public:
  constexpr explicit SubStream(std::uint64_t base) noexcept : base_(base) {}
  constexpr double uniform(std::uint64_t index) const noexcept {
    return to_unit(finalize(base_ + (index + 1) * kGolden));
  }

 private:
  std::uint64_t base_;
};

/// Counter-addressed uniform source: draw k of stream s is a pure function of
/// (seed, s, k), so any suffix of a path can be regenerated from its index.
class CounterStream {
 public:
  constexpr explicit CounterStream(std::uint64_t seed) noexcept : seed_(seed) {}

  constexpr std::uint64_t seed() const noexcept { return seed_; }

  constexpr SubStream sub(Stream s) const noexcept { return SubStream(mix(seed_, static_cast<std::uint64_t>(s))); }

  constexpr double uniform(Stream s, std::uint64_t index) const noexcept { return sub(s).uniform(index); }

  constexpr CounterStream child(std::uint64_t key) const noexcept {
    return CounterStream(mix(seed_, key));
  }

 private:
  std::uint64_t seed_;
};

/// Plain SplitMix64 sequence used for i.i.d. sampling.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  constexpr result_type operator()() noexcept {
    state_ += kGolden;
    return finalize(state_);
  }
  double uniform() noexcept { return to_unit((*this)()); }

 private:
  std::uint64_t state_;
};

}  // namespace gcruin::rng
