#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace spt {

// splitmix64 finalizer: derives an independent per-trial seed from a master
// seed and a stream index.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// mt19937_64 with hand-rolled transforms: the engine's word sequence is
// pinned by the standard, and avoiding std::*_distribution keeps the derived
// draws identical across standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double exponential1() { return -std::log1p(-uniform01()); }

  double normal(double sigma) {
    // Box-Muller without pair caching: fixed two-draw cost, fixed order.
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace spt
