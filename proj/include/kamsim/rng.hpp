#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace kamsim {

// Deterministic random source used everywhere in the simulator.
//
// The engine is std::mt19937_64, which the C++ standard pins bit-for-bit,
// and all floating-point draws are built here from raw 64-bit outputs so
// that sequences are reproducible across platforms and standard libraries
// (the std::*_distribution adapters are implementation-defined and are
// deliberately not used).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform double in the open interval (0, 1).  Used wherever a draw of
  // exactly 0 or 1 would be invalid (log transforms, positive parameters).
  double uniform01_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01_open(); }

  // Exponential(rate) via inversion; strictly positive.
  double exponential(double rate) { return -std::log(uniform01_open()) / rate; }

  // Derives the seed of child stream `index` from a master seed.
  //
  // Splitting rule (documented so runs can be reproduced externally):
  // feed master + index * golden_gamma through one splitmix64 round.
  static std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kamsim
