#pragma once

#include <cstdint>
#include <cmath>

namespace tokentiming::dist {

/// Counter-based pseudo-random stream (SplitMix64 finalizer over a keyed
/// counter).  Streams are value types: copying one forks the sequence, and
/// substream(i) derives a statistically independent stream for worker or
/// replication i, so Monte-Carlo results do not depend on thread scheduling.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : key_(mix(mix(seed) ^ kSalt)) {}

  /// Independent stream addressed by index; same (seed, index) always yields
  /// the same substream.
  RandomStream substream(std::uint64_t index) const {
    RandomStream s(*this);
    s.key_ = mix(key_ ^ mix(index + kSalt));
    s.counter_ = 0;
    return s;
  }

  std::uint64_t next_u64() { return mix(key_ + kGolden * ++counter_); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  /// Exponential with the given rate (inverse-CDF draw).
  double exponential(double rate) { return -std::log1p(-next_unit()) / rate; }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kSalt = 0x715d7e1d0e6a3cb3ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace tokentiming::dist
