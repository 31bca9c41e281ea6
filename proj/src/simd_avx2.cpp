#if defined(MIXSYS_BUILD_AVX2)
#include <immintrin.h>

#include <cstdint>
#include <cstring>

#include "mixsys/simd.hpp"
#include "simd_tabs.hpp"

namespace mixsys::simd {

namespace {

// Round-to-nearest via the 2^52+2^51 shifter; the low mantissa bits of the
// shifted value hold the integer (two's complement), which gives the quadrant
// without a float->int conversion. Valid for |2x| < 2^51.
constexpr double kShifter = 6755399441055744.0;

struct V2 {
  __m256d s, c;
};

inline V2 sincospi4(__m256d x, const SinCosTabs& t) {
  __m256d two_x = _mm256_add_pd(x, x);
  __m256d shifted = _mm256_add_pd(two_x, _mm256_set1_pd(kShifter));
  __m256d kd = _mm256_sub_pd(shifted, _mm256_set1_pd(kShifter));
  __m256d r = _mm256_fnmadd_pd(kd, _mm256_set1_pd(0.5), x);
  __m256i ki = _mm256_castpd_si256(shifted);

  __m256d r2 = _mm256_mul_pd(r, r);
  __m256d ps = _mm256_set1_pd(t.S[7]);
  for (int j = 6; j >= 0; --j) ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(t.S[j]));
  ps = _mm256_mul_pd(ps, r);
  __m256d pc = _mm256_set1_pd(t.C[8]);
  for (int j = 7; j >= 0; --j) pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(t.C[j]));

  __m256i bit0 = _mm256_and_si256(ki, _mm256_set1_epi64x(1));
  __m256i bit1 = _mm256_and_si256(ki, _mm256_set1_epi64x(2));
  __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(bit0, _mm256_set1_epi64x(1)));
  __m256d neg_s = _mm256_castsi256_pd(_mm256_cmpeq_epi64(bit1, _mm256_set1_epi64x(2)));
  __m256d neg_c = _mm256_xor_pd(swap, neg_s);

  __m256d sv = _mm256_blendv_pd(ps, pc, swap);
  __m256d cv = _mm256_blendv_pd(pc, ps, swap);
  __m256d signbit = _mm256_set1_pd(-0.0);
  sv = _mm256_xor_pd(sv, _mm256_and_pd(neg_s, signbit));
  cv = _mm256_xor_pd(cv, _mm256_and_pd(neg_c, signbit));
  return {sv, cv};
}

void sincospi_avx2(const double* x, double* s, double* c, std::size_t n) {
  const SinCosTabs& t = sincos_tabs();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    V2 v = sincospi4(_mm256_loadu_pd(x + i), t);
    _mm256_storeu_pd(s + i, v.s);
    _mm256_storeu_pd(c + i, v.c);
  }
  if (i < n) {
    double xb[4] = {0, 0, 0, 0}, sb[4], cb[4];
    std::memcpy(xb, x + i, (n - i) * sizeof(double));
    V2 v = sincospi4(_mm256_loadu_pd(xb), t);
    _mm256_storeu_pd(sb, v.s);
    _mm256_storeu_pd(cb, v.c);
    std::memcpy(s + i, sb, (n - i) * sizeof(double));
    std::memcpy(c + i, cb, (n - i) * sizeof(double));
  }
}

void phase_sum_avx2(const double* cycles, const double* w, std::size_t n,
                    double* re, double* im) {
  const SinCosTabs& t = sincos_tabs();
  __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
  __m256d cr = _mm256_setzero_pd(), ci = _mm256_setzero_pd();
  std::size_t i = 0;
  auto step = [&](__m256d ph, __m256d wi) {
    V2 v = sincospi4(_mm256_add_pd(ph, ph), t);
    __m256d yr = _mm256_sub_pd(_mm256_mul_pd(wi, v.c), cr);
    __m256d tr = _mm256_add_pd(sr, yr);
    cr = _mm256_sub_pd(_mm256_sub_pd(tr, sr), yr);
    sr = tr;
    __m256d yi = _mm256_sub_pd(_mm256_mul_pd(wi, v.s), ci);
    __m256d ti = _mm256_add_pd(si, yi);
    ci = _mm256_sub_pd(_mm256_sub_pd(ti, si), yi);
    si = ti;
  };
  for (; i + 4 <= n; i += 4)
    step(_mm256_loadu_pd(cycles + i), w ? _mm256_loadu_pd(w + i) : _mm256_set1_pd(1.0));
  if (i < n) {
    double pb[4] = {0, 0, 0, 0}, wb[4] = {0, 0, 0, 0};
    std::memcpy(pb, cycles + i, (n - i) * sizeof(double));
    for (std::size_t j = 0; i + j < n; ++j) wb[j] = w ? w[i + j] : 1.0;
    step(_mm256_loadu_pd(pb), _mm256_loadu_pd(wb));
  }
  // Deterministic lane order: hi sums left to right, then the compensations.
  double srl[4], sil[4], crl[4], cil[4];
  _mm256_storeu_pd(srl, sr);
  _mm256_storeu_pd(sil, si);
  _mm256_storeu_pd(crl, cr);
  _mm256_storeu_pd(cil, ci);
  double R = 0, I = 0;
  for (int j = 0; j < 4; ++j) R += srl[j];
  for (int j = 0; j < 4; ++j) R -= crl[j];
  for (int j = 0; j < 4; ++j) I += sil[j];
  for (int j = 0; j < 4; ++j) I -= cil[j];
  *re = R;
  *im = I;
}

void rotate_accumulate_avx2(double* ar, double* ai, const double* br, const double* bi,
                            std::size_t n, double* re, double* im) {
  __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xr = _mm256_loadu_pd(ar + i), xi = _mm256_loadu_pd(ai + i);
    __m256d yr = _mm256_loadu_pd(br + i), yi = _mm256_loadu_pd(bi + i);
    __m256d zr = _mm256_fmsub_pd(xr, yr, _mm256_mul_pd(xi, yi));
    __m256d zi = _mm256_fmadd_pd(xr, yi, _mm256_mul_pd(xi, yr));
    _mm256_storeu_pd(ar + i, zr);
    _mm256_storeu_pd(ai + i, zi);
    sr = _mm256_add_pd(sr, zr);
    si = _mm256_add_pd(si, zi);
  }
  double srl[4], sil[4];
  _mm256_storeu_pd(srl, sr);
  _mm256_storeu_pd(sil, si);
  double R = srl[0] + srl[1] + srl[2] + srl[3];
  double I = sil[0] + sil[1] + sil[2] + sil[3];
  for (; i < n; ++i) {
    double zr = ar[i] * br[i] - ai[i] * bi[i];
    double zi = ar[i] * bi[i] + ai[i] * br[i];
    ar[i] = zr;
    ai[i] = zi;
    R += zr;
    I += zi;
  }
  *re = R;
  *im = I;
}

}  // namespace

const Backend* avx2_backend_impl() {
  static const Backend b{"avx2", sincospi_avx2, phase_sum_avx2, rotate_accumulate_avx2};
  return &b;
}

}  // namespace mixsys::simd

#else

namespace mixsys::simd {
struct Backend;
const Backend* avx2_backend_impl() { return nullptr; }
}  // namespace mixsys::simd

#endif
