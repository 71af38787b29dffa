#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace scartower {

/// Seeded random source with fully pinned-down output.  All draws are
/// derived from raw mt19937_64 words, never from distribution objects,
/// so a given seed produces the same stream on every platform and
/// standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  /// Nonzero complex coefficient with magnitude in [0.25, 1.5].
  std::complex<double> coefficient() {
    const double r = uniform(0.25, 1.5);
    const double phi = uniform(0.0, 6.283185307179586);
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  /// Nonzero real coefficient with magnitude in [0.25, 1.5].
  double real_coefficient() {
    const double r = uniform(0.25, 1.5);
    return uniform() < 0.5 ? -r : r;
  }

  /// Independent child stream; used to give sampled sub-objects their
  /// own seeds so insertion order does not perturb later draws.
  Rng fork() { return Rng(next_u64() ^ 0x9e3779b97f4a7c15ull); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace scartower
