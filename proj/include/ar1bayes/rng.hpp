#pragma once

#include <cstdint>
#include <random>

namespace ar1bayes {

// Deterministic random source used throughout the library.
//
// std::mt19937_64 has a fully specified output sequence, and both
// transforms below are explicit, so a given seed produces the same
// stream on every platform and compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0,1) with 53-bit resolution.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal draw via the inverse-cdf transform.  One uniform is
  // consumed per draw, so the stream position is predictable.
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace ar1bayes
