#ifndef SLDSKIT_RNG_HPP
#define SLDSKIT_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sldskit {

// xoshiro256++ with splitmix64 seeding. Self-contained so that identical
// seeds give bit-identical streams on every platform (the standard library
// distributions make no such promise).
//
// A generator remembers the seed it was built from; substream(tag) derives
// an independent generator from (seed, tag) without consuming state. Run
// harnesses derive one generator per Monte Carlo run from (base seed, run
// index), which keeps results independent of thread count and schedule.
class Rng {
 public:
  // fixed tags for the per-run substreams
  static constexpr std::uint64_t kInitialState = 1;
  static constexpr std::uint64_t kProcessNoise = 2;
  static constexpr std::uint64_t kMeasurementNoise = 3;
  static constexpr std::uint64_t kModeSequence = 4;
  static constexpr std::uint64_t kRepresentative = 5;

  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& si : s_) si = splitmix64(x);
  }

  std::uint64_t seed() const { return seed_; }

  Rng substream(std::uint64_t tag) const { return Rng(mix(seed_, tag ^ 0x53554253ULL)); }

  static Rng for_run(std::uint64_t base_seed, std::uint64_t run_index) {
    return Rng(mix(base_seed, run_index ^ 0x52554E5FULL));
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

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller; the sine mate is cached
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    // u1 in (0, 1] so the log is finite
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  void fill_normal(std::vector<double>& out) {
    for (double& v : out) v = normal();
  }

  // index sampled according to the (normalized) weights
  int categorical(const std::vector<double>& probs) {
    if (probs.empty()) throw std::invalid_argument("categorical with no outcomes");
    const double u = uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    return splitmix64(x);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace sldskit

#endif  // SLDSKIT_RNG_HPP
