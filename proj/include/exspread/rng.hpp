#ifndef EXSPREAD_RNG_HPP
#define EXSPREAD_RNG_HPP

#include <cmath>
#include <cstdint>

namespace exspread {

// Counter-keyed pseudo-random streams. Each (seed, replica, stream) triple
// yields a statistically independent xoshiro256++ generator, so replica
// results do not depend on scheduling order or thread count.
class Rng {
 public:
  static constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  explicit Rng(std::uint64_t key = 0) {
    // splitmix64 expansion of the key into the 256-bit state
    std::uint64_t x = key;
    for (auto& w : s_) {
      x += kGoldenGamma;
      w = mix64(x);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = kGoldenGamma;
  }

  static Rng keyed(std::uint64_t seed, std::uint64_t replica, std::uint64_t stream) {
    std::uint64_t k = mix64(seed + kGoldenGamma);
    k = mix64(k ^ (replica + 0x6a09e667f3bcc909ULL));
    k = mix64(k ^ (stream + 0xbb67ae8584caa73bULL));
    return Rng(k);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0,1) with 53 random bits
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in (0,1], safe as a log argument
  double uniform_pos() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  bool bernoulli(double p) { return uniform() < p; }

  // unbiased integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

// Stable stream ids used by the simulators. Keeping them in one place makes
// matched-seed comparisons between process types meaningful.
namespace stream {
inline constexpr std::uint64_t kInitialCondition = 1;
inline constexpr std::uint64_t kDynamics = 2;
inline constexpr std::uint64_t kAux = 3;
}  // namespace stream

}  // namespace exspread

#endif
