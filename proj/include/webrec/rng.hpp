#pragma once

#include <cmath>
#include <cstdint>

// Deterministic splittable random streams (splitmix64 key mixing + xoshiro256++).
// A stream is identified by up to three 64-bit keys; the stream for realisation
// i of an ensemble is RngStream(master_seed, i, purpose), so realisations are
// order-independent and safe to draw from concurrently (one stream per worker).

namespace webrec {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Collapse (master, a, b) into a single seed for APIs that take one integer.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t st = master;
  std::uint64_t z = splitmix64(st);
  st = z ^ (a * 0x9E3779B97F4A7C15ull);
  z = splitmix64(st);
  st = z ^ (b * 0xD1B54A32D192ED03ull);
  return splitmix64(st);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t k0, std::uint64_t k1 = 0, std::uint64_t k2 = 0) {
    std::uint64_t st = derive_seed(k0, k1, k2);
    for (auto& w : s_) w = splitmix64(st);
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

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal via Box-Muller (deterministic draw order, cached spare).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace webrec
