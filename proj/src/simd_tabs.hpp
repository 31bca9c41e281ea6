#pragma once
// Shared Taylor tables for sin(pi r), cos(pi r) on |r| <= 1/4, used by both the
// scalar reference kernels and the AVX2 variants. Coefficients are pi^(2k+1)/(2k+1)!
// and pi^(2k)/(2k)! correctly rounded (built once in double-double).
#include <cstddef>

namespace mixsys::simd {

struct SinCosTabs {
  double S[8];  // sin: r*(S0 + S1 r^2 + ... + S7 r^14)
  double C[9];  // cos: C0 + C1 r^2 + ... + C8 r^16
};

const SinCosTabs& sincos_tabs();

}  // namespace mixsys::simd
