#pragma once

#include <boost/random/exponential_distribution.hpp>
#include <cmath>
#include <cstdint>
#include <limits>

namespace cachenet {

/// SplitMix64 generator. Streams are keyed by a counter tuple, so every
/// trial (and every mark of every node) owns an independent substream and
/// results never depend on the order in which trials are scheduled.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream)
      : state_(key(seed, trial, stream)) {}

  /// Substream `mark` of item `index` under an already mixed key.
  static CounterRng at(std::uint64_t key, std::uint64_t index, std::uint64_t mark) {
    return CounterRng(key ^ mix(index * 8 + mark + 1));
  }

  static std::uint64_t key(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
    return mix(mix(seed ^ 0x243F6A8885A308D3ULL) ^ mix(trial + 0x13198A2E03707344ULL) ^
               mix(stream * 0xA4093822299F31D0ULL + 0x082EFA98EC4E6C89ULL));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next(); }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  /// Unit-mean exponential (ziggurat), strictly positive.
  double exponential() {
    boost::random::exponential_distribution<double> dist;
    double x = dist(*this);
    while (x == 0.0) x = dist(*this);
    return x;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  explicit CounterRng(std::uint64_t state) : state_(state) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  std::uint64_t state_;
};

}  // namespace cachenet
