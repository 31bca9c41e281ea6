#include <cmath>
#include <cstdint>

#include "mixsys/simd.hpp"
#include "simd_tabs.hpp"

namespace mixsys::simd {

namespace {

inline void sincospi_one(double x, const SinCosTabs& t, double& s_out, double& c_out) {
  // x = k/2 + r with |r| <= 1/4; quadrant k mod 4 picks signs and the swap.
  double kd = std::nearbyint(2.0 * x);
  double r = x - 0.5 * kd;
  long long k = static_cast<long long>(kd);
  double r2 = r * r;
  double ps = t.S[7];
  for (int j = 6; j >= 0; --j) ps = ps * r2 + t.S[j];
  ps *= r;
  double pc = t.C[8];
  for (int j = 7; j >= 0; --j) pc = pc * r2 + t.C[j];
  switch (k & 3) {
    case 0: s_out = ps; c_out = pc; break;
    case 1: s_out = pc; c_out = -ps; break;
    case 2: s_out = -ps; c_out = -pc; break;
    default: s_out = -pc; c_out = ps; break;
  }
}

void sincospi_scalar(const double* x, double* s, double* c, std::size_t n) {
  const SinCosTabs& t = sincos_tabs();
  for (std::size_t i = 0; i < n; ++i) sincospi_one(x[i], t, s[i], c[i]);
}

void phase_sum_scalar(const double* cycles, const double* w, std::size_t n,
                      double* re, double* im) {
  const SinCosTabs& t = sincos_tabs();
  double sr = 0.0, si = 0.0, cr = 0.0, ci = 0.0;  // Kahan sums + compensations
  for (std::size_t i = 0; i < n; ++i) {
    double s, co;
    sincospi_one(2.0 * cycles[i], t, s, co);
    double wi = w ? w[i] : 1.0;
    double yr = wi * co - cr;
    double tr = sr + yr;
    cr = (tr - sr) - yr;
    sr = tr;
    double yi = wi * s - ci;
    double ti = si + yi;
    ci = (ti - si) - yi;
    si = ti;
  }
  *re = sr;
  *im = si;
}

void rotate_accumulate_scalar(double* ar, double* ai, const double* br, const double* bi,
                              std::size_t n, double* re, double* im) {
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double xr = ar[i] * br[i] - ai[i] * bi[i];
    double xi = ar[i] * bi[i] + ai[i] * br[i];
    ar[i] = xr;
    ai[i] = xi;
    sr += xr;
    si += xi;
  }
  *re = sr;
  *im = si;
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend b{"scalar", sincospi_scalar, phase_sum_scalar, rotate_accumulate_scalar};
  return b;
}

}  // namespace mixsys::simd
