#pragma once

// Seeded, portable random streams. All randomness in this project flows
// through these helpers so that artifacts are bit-reproducible:
//   - engine: std::mt19937_64 (bit-exact sequence mandated by the standard)
//   - u64 -> f64 mapping written out explicitly below (libstdc++/libc++
//     distributions are NOT interchangeable, so we avoid <random>'s
//     distribution classes entirely)
//   - normal transform: trigonometric Box-Muller
// These choices are frozen; changing any of them invalidates stored seeds.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace fracrom {

// SplitMix64 finalizer; used to derive independent substream seeds from
// (seed, key) pairs without correlation between nearby keys.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t key) {
  return splitmix64(splitmix64(seed) ^ splitmix64(key * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
}

// Uniform doubles from the top 53 bits: [0,1) and (0,1] variants.
inline double u64_to_unit_half_open(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}
inline double u64_to_unit_open_top(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : gen_(seed) {}
  // in [0,1)
  double next() { return u64_to_unit_half_open(gen_()); }
  double next_in(double lo, double hi) { return lo + (hi - lo) * next(); }
  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] keeps the log finite; u2 in [0,1).
    const double u1 = u64_to_unit_open_top(gen_());
    const double u2 = u64_to_unit_half_open(gen_());
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace fracrom
