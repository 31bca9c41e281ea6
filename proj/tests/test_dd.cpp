#include <doctest.h>
#include <mpfr.h>

#include <cmath>

#include "mixsys/dd.hpp"
#include "mixsys/rng.hpp"

using namespace mixsys;

namespace {

// Relative gap between a dd value and a 200-bit reference.
double rel_err(const dd::DD& v, mpfr_t ref) {
  mpfr_t t;
  mpfr_init2(t, 200);
  mpfr_sub_d(t, ref, v.hi, MPFR_RNDN);
  mpfr_sub_d(t, t, v.lo, MPFR_RNDN);
  if (mpfr_cmp_ui(ref, 0) != 0) mpfr_div(t, t, ref, MPFR_RNDN);
  double e = std::fabs(mpfr_get_d(t, MPFR_RNDN));
  mpfr_clear(t);
  return e;
}

}  // namespace

TEST_CASE("dd add/mul are error-free, div/pow track a 200-bit reference") {
  mpfr_t a, b, r;
  mpfr_init2(a, 200);
  mpfr_init2(b, 200);
  mpfr_init2(r, 200);
  for (int i = 0; i < 400; ++i) {
    double x = rng::uniform(7, 1, 2 * i, -50.0, 50.0);
    double y = rng::uniform(7, 1, 2 * i + 1, -50.0, 50.0);
    if (std::fabs(y) < 1e-3) y = 1e-3;
    mpfr_set_d(a, x, MPFR_RNDN);
    mpfr_set_d(b, y, MPFR_RNDN);

    mpfr_add(r, a, b, MPFR_RNDN);
    CHECK(rel_err(dd::add(dd::DD{x}, dd::DD{y}), r) == 0.0);

    mpfr_mul(r, a, b, MPFR_RNDN);
    CHECK(rel_err(dd::mul(dd::DD{x}, dd::DD{y}), r) == 0.0);

    mpfr_sub(r, a, b, MPFR_RNDN);
    CHECK(rel_err(dd::sub(dd::DD{x}, dd::DD{y}), r) == 0.0);

    mpfr_div(r, a, b, MPFR_RNDN);
    CHECK(rel_err(dd::div(dd::DD{x}, dd::DD{y}), r) < 1e-30);
  }

  for (int i = 0; i < 200; ++i) {
    double x = rng::uniform(11, 2, 2 * i, 0.5, 300.0);
    double p = rng::uniform(11, 2, 2 * i + 1, 0.25, 3.5);
    mpfr_set_d(a, x, MPFR_RNDN);
    mpfr_set_d(b, p, MPFR_RNDN);
    mpfr_pow(r, a, b, MPFR_RNDN);
    CHECK(rel_err(dd::pow(x, p), r) < 1e-28);
  }

  mpfr_clear(a);
  mpfr_clear(b);
  mpfr_clear(r);
}

TEST_CASE("dd fract reproduces phases alpha*x^theta mod 1") {
  // The whole point of dd: x^theta is ~1e10, so plain doubles keep only ~6
  // digits of the fractional part. dd must keep ~20.
  mpfr_t a, r;
  mpfr_init2(a, 200);
  mpfr_init2(r, 200);
  for (int i = 0; i < 100; ++i) {
    double x = rng::uniform(13, 3, 2 * i, 1.0, 1e4);
    double alpha = rng::uniform(13, 3, 2 * i + 1, -3.0, 3.0);
    dd::DD phase = dd::fract(dd::mul(dd::pow(x, 2.5), alpha));
    CHECK(phase.hi >= 0.0);
    CHECK(phase.hi < 1.0);

    mpfr_set_d(a, x, MPFR_RNDN);
    mpfr_t e;
    mpfr_init2(e, 200);
    mpfr_set_d(e, 2.5, MPFR_RNDN);
    mpfr_pow(r, a, e, MPFR_RNDN);
    mpfr_mul_d(r, r, alpha, MPFR_RNDN);
    mpfr_frac(r, r, MPFR_RNDN);
    if (mpfr_sgn(r) < 0) mpfr_add_ui(r, r, 1, MPFR_RNDN);
    double ref = mpfr_get_d(r, MPFR_RNDN);
    double got = phase.hi + phase.lo;
    // Wrap-around: phases that land within eps of 0 may legitimately sit on
    // the other side of the circle relative to the reference.
    double diff = std::fabs(got - ref);
    diff = std::min(diff, std::fabs(1.0 - diff));
    CHECK(diff < 1e-17);
    mpfr_clear(e);
  }
  mpfr_clear(a);
  mpfr_clear(r);
}

TEST_CASE("dd from_i64 and powi are exact on integers") {
  long long v = 123456789012345678LL;
  dd::DD d = dd::from_i64(v);
  CHECK(static_cast<long long>(d.hi) + static_cast<long long>(d.lo) == v);

  // 3^30 = 205891132094649 fits in a double-double exactly.
  dd::DD p = dd::powi(dd::DD{3.0}, 30);
  CHECK(p.hi == 205891132094649.0);
  CHECK(p.lo == 0.0);
}

TEST_CASE("dd floor handles hi on an integer boundary") {
  dd::DD a{5.0, -1e-20};  // just below 5
  dd::DD f = dd::floor(a);
  CHECK(f.hi == 4.0);
  dd::DD b{5.0, 1e-20};  // just above 5
  CHECK(dd::floor(b).hi == 5.0);
}
