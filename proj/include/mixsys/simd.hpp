#pragma once
// Runtime-dispatched numeric kernels. The scalar backend is the reference
// implementation; the AVX2 backend must agree with it to tolerance (see
// tests). Selection: MIXSYS_SIMD env var ("scalar"/"avx2") overrides, else the
// best backend the CPU supports wins.
#include <complex>
#include <cstddef>
#include <vector>

namespace mixsys::simd {

struct Backend {
  const char* name;
  // s[i] = sin(pi x[i]), c[i] = cos(pi x[i]).
  void (*sincospi)(const double* x, double* s, double* c, std::size_t n);
  // Compensated sum of w[i] * e(cycles[i]) where e(t) = exp(2 pi i t).
  // w == nullptr means unit weights.
  void (*phase_sum)(const double* cycles, const double* w, std::size_t n,
                    double* re, double* im);
  // acc[i] *= rot[i] (complex, split arrays), then *re,*im = sum of acc.
  void (*rotate_accumulate)(double* acc_re, double* acc_im, const double* rot_re,
                            const double* rot_im, std::size_t n, double* re, double* im);
};

const Backend& scalar_backend();
const Backend* avx2_backend();  // nullptr when unsupported
const Backend& backend();
std::vector<const Backend*> available_backends();

inline std::complex<double> phase_sum(const double* cycles, const double* w, std::size_t n) {
  double re, im;
  backend().phase_sum(cycles, w, n, &re, &im);
  return {re, im};
}

}  // namespace mixsys::simd
