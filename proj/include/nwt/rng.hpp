#ifndef NWT_RNG_HPP
#define NWT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace nwt {

/// Seedable uniform pseudo-random source with a platform-independent stream.
/// Built on std::mt19937_64, whose output sequence is fixed by the standard;
/// the derived draws below avoid std::uniform_int_distribution and friends,
/// whose streams are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Unbiased integer in [0, n), n >= 1, via rejection sampling.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    while (true) {
      const std::uint64_t x = gen_();
      if (x >= threshold) return x % n;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Exponential waiting time with the given rate, by inverse transform.
  /// Exactly one uniform draw per call.
  double exponential(double rate) {
    return -std::log(1.0 - uniform01()) / rate;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace nwt

#endif  // NWT_RNG_HPP
