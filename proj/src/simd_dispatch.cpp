#include <cstdlib>
#include <cstring>
#include <string>

#include "mixsys/dd.hpp"
#include "mixsys/simd.hpp"
#include "simd_tabs.hpp"

namespace mixsys::simd {

const Backend* avx2_backend_impl();  // simd_avx2.cpp

namespace {
SinCosTabs build_tabs() {
  // S[k] = (-1)^k pi^(2k+1)/(2k+1)!, C[k] = (-1)^k pi^(2k)/(2k)!, correctly
  // rounded through double-double so the polynomial error is pure truncation.
  SinCosTabs t{};
  using namespace mixsys::dd;
  DD fact{1.0};
  DD pip{1.0};  // pi^j at step j
  int cs = 0, cc = 0;
  for (int j = 0; j <= 16; ++j) {
    if (j > 0) {
      fact = mul(fact, static_cast<double>(j));
      pip = mul(pip, kPi);
    }
    DD coef = div(pip, fact);
    if (j % 2 == 1 && cs < 8) {
      t.S[cs] = ((cs % 2) ? neg(coef) : coef).to_double();
      ++cs;
    } else if (j % 2 == 0 && cc < 9) {
      t.C[cc] = ((cc % 2) ? neg(coef) : coef).to_double();
      ++cc;
    }
  }
  return t;
}
}  // namespace

const SinCosTabs& sincos_tabs() {
  static const SinCosTabs t = build_tabs();
  return t;
}

const Backend* avx2_backend() {
#if defined(MIXSYS_BUILD_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return avx2_backend_impl();
#endif
  return nullptr;
}

const Backend& backend() {
  static const Backend* chosen = [] {
    const char* env = std::getenv("MIXSYS_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_backend();
    if (env && std::strcmp(env, "avx2") == 0 && avx2_backend()) return avx2_backend();
    if (const Backend* a = avx2_backend()) return a;
    return &scalar_backend();
  }();
  return *chosen;
}

std::vector<const Backend*> available_backends() {
  std::vector<const Backend*> v{&scalar_backend()};
  if (const Backend* a = avx2_backend()) v.push_back(a);
  return v;
}

}  // namespace mixsys::simd
