#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

// Array kernels for the hot loops: element-wise water-filling, weighted
// spectral-efficiency sums, and batch dB -> linear conversion. A scalar
// reference implementation always exists; an AVX2 variant is selected at
// runtime when the CPU supports it (override with SPT_KERNELS=scalar|avx2).

namespace spt::kernels {

// powers[i] = bands[i] * max(level - n0/gains[i], 0); returns sum(powers).
// Requires gains[i] > 0, bands[i] > 0.
using WaterfillFn = double (*)(const double* gains, const double* bands,
                               double level, double n0, double* powers,
                               std::size_t n);

// Returns sum_i bands[i] * log2(1 + powers[i]*gains[i] / (bands[i]*n0)).
// Requires bands[i] > 0, gains[i] > 0, powers[i] >= 0, n0 > 0.
using RateSumFn = double (*)(const double* powers, const double* gains,
                             const double* bands, double n0, std::size_t n);

// Returns sum_i x[i].
using SumFn = double (*)(const double* x, std::size_t n);

// lin[i] = 10^(-db[i]/10). Requires |db[i]| <= 3000.
using DbToLinearFn = void (*)(const double* db, double* lin, std::size_t n);

struct Ops {
  std::string_view name;
  WaterfillFn waterfill;
  RateSumFn rate_sum;
  SumFn sum;
  DbToLinearFn db_to_linear;
};

const Ops& scalar();
bool avx2_supported();        // compiled in and CPU+OS support present
const Ops& avx2();            // only valid when avx2_supported()

// Implementation chosen once per process: SPT_KERNELS env override if set
// (unknown names fall back to the default choice), else AVX2 when supported,
// else scalar.
const Ops& active();

// All implementations usable on this machine (scalar first).
std::vector<const Ops*> supported();

}  // namespace spt::kernels
