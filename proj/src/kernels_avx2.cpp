#include <immintrin.h>

#include <cstring>

#include "spt/kernels.hpp"

// AVX2 + FMA variants. Transcendentals are evaluated with in-register
// polynomial kernels (no libm calls in the vector body); lane sums are
// reduced in a fixed order so results are deterministic for a given input.

namespace spt::kernels {

namespace {

// log2(x) for normal positive x: split x = 2^e * m, m in [sqrt(0.5), sqrt(2)),
// then log(m) = 2*atanh(z) with z = (m-1)/(m+1), as z times a polynomial in
// z^2 (atanh series through z^19; |z| <= 0.172 keeps truncation below 1 ulp).
inline __m256d v_log2(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730951);
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i exp_one = _mm256_set1_epi64x(0x3FF0000000000000LL);

  __m256i bits = _mm256_castpd_si256(x);
  __m256i biased = _mm256_srli_epi64(bits, 52);
  __m256i mbits = _mm256_or_si256(_mm256_and_si256(bits, mant_mask), exp_one);
  __m256d m = _mm256_castsi256_pd(mbits);  // [1, 2)

  // Exponents fit in int32: narrow the 64-bit lanes and convert.
  const __m256i pack_idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
  __m128i e32 =
      _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(biased, pack_idx));
  __m256d e = _mm256_sub_pd(_mm256_cvtepi32_pd(e32), _mm256_set1_pd(1023.0));

  __m256d gt = _mm256_cmp_pd(m, sqrt2, _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, half), gt);
  e = _mm256_add_pd(e, _mm256_and_pd(gt, one));

  __m256d z = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  __m256d w = _mm256_mul_pd(z, z);
  __m256d p = _mm256_set1_pd(2.0 / 19.0);
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(2.0 / 17.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(2.0 / 15.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(2.0 / 13.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(2.0 / 11.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(2.0 / 9.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(2.0 / 7.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(2.0 / 5.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(2.0 / 3.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(2.0));
  __m256d ln_m = _mm256_mul_pd(z, p);
  return _mm256_fmadd_pd(ln_m, log2e, e);
}

// 2^x for |x| <= 1020: x = n + f with n integral and |f| <= 0.5;
// 2^f = e^(f*ln2) by Taylor through t^14/14!, scaled by 2^n via exponent bits.
inline __m256d v_exp2(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  x = _mm256_min_pd(_mm256_max_pd(x, _mm256_set1_pd(-1020.0)),
                    _mm256_set1_pd(1020.0));
  __m256d n =
      _mm256_round_pd(x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d f = _mm256_sub_pd(x, n);
  __m256d t = _mm256_mul_pd(f, _mm256_set1_pd(0.6931471805599453));

  __m256d p = _mm256_set1_pd(1.0 / 87178291200.0);  // 1/14!
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.0 / 6227020800.0));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, t, one);
  p = _mm256_fmadd_pd(p, t, one);

  __m128i ni = _mm256_cvtpd_epi32(n);
  __m256i ni64 = _mm256_cvtepi32_epi64(ni);
  __m256i ebits = _mm256_slli_epi64(
      _mm256_add_epi64(ni64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(ebits));
}

inline double reduce_lanes(__m256d acc) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return ((lane[0] + lane[1]) + lane[2]) + lane[3];
}

// Element ops match the scalar reference exactly (div, sub, max, mul; no
// fused contraction), and the total re-sums the stored powers in index
// order, so both outputs are bit-identical to scalar.
double waterfill_avx2(const double* gains, const double* bands, double level,
                      double n0, double* powers, std::size_t n) {
  const __m256d vlevel = _mm256_set1_pd(level);
  const __m256d vn0 = _mm256_set1_pd(n0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d g = _mm256_loadu_pd(gains + i);
    __m256d b = _mm256_loadu_pd(bands + i);
    __m256d head = _mm256_sub_pd(vlevel, _mm256_div_pd(vn0, g));
    __m256d p = _mm256_mul_pd(b, _mm256_max_pd(head, zero));
    _mm256_storeu_pd(powers + i, p);
  }
  for (; i < n; ++i) {
    double head = level - n0 / gains[i];
    powers[i] = bands[i] * (head > 0.0 ? head : 0.0);
  }
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) total += powers[j];
  return total;
}

double rate_sum_avx2(const double* powers, const double* gains,
                     const double* bands, double n0, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d vn0 = _mm256_set1_pd(n0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_loadu_pd(powers + i);
    __m256d g = _mm256_loadu_pd(gains + i);
    __m256d b = _mm256_loadu_pd(bands + i);
    __m256d snr = _mm256_div_pd(_mm256_mul_pd(p, g), _mm256_mul_pd(b, vn0));
    acc = _mm256_fmadd_pd(b, v_log2(_mm256_add_pd(one, snr)), acc);
  }
  double total = reduce_lanes(acc);
  if (i < n) {
    // Pad the tail with lanes that contribute exactly zero (p=0 -> log2(1)).
    alignas(32) double tp[4] = {0, 0, 0, 0};
    alignas(32) double tg[4] = {1, 1, 1, 1};
    alignas(32) double tb[4] = {1, 1, 1, 1};
    std::size_t rem = n - i;
    std::memcpy(tp, powers + i, rem * sizeof(double));
    std::memcpy(tg, gains + i, rem * sizeof(double));
    std::memcpy(tb, bands + i, rem * sizeof(double));
    __m256d p = _mm256_load_pd(tp);
    __m256d g = _mm256_load_pd(tg);
    __m256d b = _mm256_load_pd(tb);
    __m256d snr = _mm256_div_pd(_mm256_mul_pd(p, g), _mm256_mul_pd(b, vn0));
    alignas(32) double term[4];
    _mm256_store_pd(term, _mm256_mul_pd(b, v_log2(_mm256_add_pd(one, snr))));
    for (std::size_t j = 0; j < rem; ++j) total += term[j];
  }
  return total;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = reduce_lanes(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

void db_to_linear_avx2(const double* db, double* lin, std::size_t n) {
  // 10^(-d/10) = 2^(-d * log2(10)/10)
  const __m256d scale = _mm256_set1_pd(-0.33219280948873623);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(db + i);
    _mm256_storeu_pd(lin + i, v_exp2(_mm256_mul_pd(d, scale)));
  }
  if (i < n) {
    alignas(32) double td[4] = {0, 0, 0, 0};
    std::size_t rem = n - i;
    std::memcpy(td, db + i, rem * sizeof(double));
    alignas(32) double tl[4];
    _mm256_store_pd(tl, v_exp2(_mm256_mul_pd(_mm256_load_pd(td), scale)));
    std::memcpy(lin + i, tl, rem * sizeof(double));
  }
}

}  // namespace

const Ops& avx2() {
  static const Ops ops{"avx2", waterfill_avx2, rate_sum_avx2, sum_avx2,
                       db_to_linear_avx2};
  return ops;
}

}  // namespace spt::kernels
