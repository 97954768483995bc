#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace peakfit {

// splitmix64 (Steele, Lea, Vigna). Used only to expand a user seed into the
// xoshiro state so that nearby seeds give unrelated streams.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ (Blackman & Vigna 2019). A fixed, fully specified generator is
// used instead of the standard-library distributions so that seeded output is
// bit-identical across platforms and toolchains.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0,1): top 53 bits of the state word.
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0,1): (k + 0.5) / 2^52. Never returns an
  // endpoint, so log() and tan() transforms below stay finite.
  double uniform_open() { return (double(next() >> 12) + 0.5) * 0x1.0p-52; }

  bool bernoulli_half() { return (next() >> 63) != 0; }

  // One standard-normal draw via Box-Muller, cosine branch only; consumes
  // exactly two uniforms per draw (no cached spare).
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Cauchy draw via the tangent transform of a single open uniform.
  double cauchy(double location, double scale) {
    return location + scale * std::tan(std::numbers::pi * (uniform_open() - 0.5));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace peakfit
