#pragma once

// Reproducible per-path random streams. Each path gets its own xoshiro256++
// generator seeded from (seed, stream index) through the splitmix64 finalizer,
// so parallel and serial runs draw identical numbers. All samplers are written
// out explicitly; nothing depends on libstdc++ distribution internals.

#include <cmath>
#include <cstdint>

namespace ouexit {

// splitmix64 finalizer (Vigna); also used to decorrelate stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& word : s_) word = sm.next();
  }
  std::uint64_t next() {
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

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t stream)
      : rng_(mix64(seed ^ mix64(stream + 1))) {}

  double uniform() { // [0, 1)
    return static_cast<double>(rng_.next() >> 11) * 0x1.0p-53;
  }
  double uniform_pos() { // (0, 1]
    return static_cast<double>((rng_.next() >> 11) + 1) * 0x1.0p-53;
  }
  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  double normal() { // Box-Muller, pairwise
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double theta = 6.283185307179586 * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double gamma(double shape) { // Marsaglia-Tsang, unit scale
    if (shape < 1.0) {
      return gamma(shape + 1.0) * std::pow(uniform_pos(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  Xoshiro256pp rng_;
  double spare_ = 0;
  bool has_spare_ = false;
};

}  // namespace ouexit
