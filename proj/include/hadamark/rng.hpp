#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hadamark {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent sub-seed from (seed, stream). Used to give every
/// run of a multi-run experiment its own random stream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t a = seed;
  std::uint64_t h = splitmix64(a);
  std::uint64_t b = stream ^ 0x632be59bd9b4e019ULL;
  return h ^ splitmix64(b);
}

/// xoshiro256** with hand-rolled distributions. The standard <random>
/// distributions are implementation-defined, so seeded outputs would not be
/// stable across compilers; everything here is pinned bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& s : state_) s = splitmix64(sm);
  }

  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix_seed(seed, index));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform integer in [0, n), unbiased (rejection on the modulo threshold).
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform_real(double lo, double hi) { return lo + real01() * (hi - lo); }

  /// Box-Muller normal deviate; the paired deviate is cached.
  double normal(double mean, double sigma) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + sigma * spare_;
    }
    double u1 = real01();
    while (u1 == 0.0) u1 = real01();
    const double u2 = real01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return mean + sigma * radius * std::cos(angle);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = uniform_below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  /// k distinct values drawn uniformly from {0, ..., n-1} (partial
  /// Fisher-Yates; order of the returned values is the draw order).
  std::vector<std::int32_t> sample(std::int32_t n, std::int32_t k) {
    if (k < 0 || k > n) throw std::invalid_argument("sample: k out of range");
    std::vector<std::int32_t> pool(n);
    for (std::int32_t i = 0; i < n; ++i) pool[i] = i;
    for (std::int32_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::int32_t>(uniform_below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

  /// Two distinct indices in [0, n); the first draw is uniform, the second
  /// uniform over the remaining n-1 values.
  std::pair<std::int32_t, std::int32_t> distinct_pair(std::int32_t n) {
    if (n < 2) throw std::invalid_argument("distinct_pair: need n >= 2");
    const auto i = static_cast<std::int32_t>(uniform_below(n));
    auto j = static_cast<std::int32_t>(uniform_below(n - 1));
    if (j >= i) ++j;
    return {i, j};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4] = {};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hadamark
