#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace aftrack {

/// Deterministic random stream owned by the caller. The engine is a
/// mt19937_64 keyed by a 64-bit seed; substreams are derived with a
/// splitmix64 mix of (seed, index) so that per-trial draws do not depend
/// on execution order or thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);

  /// Circular complex normal CN(0,1): real and imaginary parts each have
  /// variance 1/2, |z|^2 is exponential with mean 1.
  std::complex<double> complex_normal();

  /// Independent stream for (seed, index). Stable across platforms.
  static Rng substream(std::uint64_t seed, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

}  // namespace aftrack
