#include <doctest.h>

#include <cmath>
#include <complex>

#include "mixsys/expsum.hpp"
#include "mixsys/rng.hpp"
#include "oracle_values.hpp"

using namespace mixsys;

namespace {

model::SystemSpec quad_spec() {
  model::SystemSpec s;
  s.theta = 2.5;
  s.d = 2;
  s.lambda = {1.0, 2.0};
  s.mu = {-1.0, -3.0};
  s.a_coeffs = {1, -2};
  s.b_coeffs = {1, -1};
  s.tau = 0.5;
  s.strict_mode = false;
  return s;
}

// Naive long-double reference for a twisted sum over lo < x <= hi.
std::complex<double> naive_sum(long long lo, long long hi, long long cd, double ct,
                               expsum::PhasePoint p, double theta, int d) {
  long double re = 0.0L, im = 0.0L;
  const long double two_pi = 6.283185307179586476925286766559L;
  for (long long x = lo + 1; x <= hi; ++x) {
    long double xd = 1.0L;
    for (int k = 0; k < d; ++k) xd *= x;
    long double ph = (long double)cd * (long double)p.alpha_d * xd +
                     (long double)ct * (long double)p.alpha_theta *
                         powl((long double)x, (long double)theta);
    ph -= floorl(ph);
    re += cosl(two_pi * ph);
    im += sinl(two_pi * ph);
  }
  return {(double)re, (double)im};
}

}  // namespace

TEST_CASE("pure theta-sum matches the frozen high-precision value") {
  auto v = expsum::eval_g(0.123, 50, 2.5);
  CHECK(v.terms == 50);
  CHECK(std::fabs(v.value.real() - oracle::kGSum123Re) < 1e-10);
  CHECK(std::fabs(v.value.imag() - oracle::kGSum123Im) < 1e-10);
  CHECK(v.max_phase_error < 1e-12);
}

TEST_CASE("complete rational sums: exact small cases") {
  // S(3,1,2) = i sqrt(3).
  auto s312 = expsum::complete_sum(3, 1, 2);
  CHECK(std::fabs(s312.real()) < 1e-13);
  CHECK(std::fabs(s312.imag() - std::sqrt(3.0)) < 1e-13);
  // S(4,1,2) = 2 + 2i.
  auto s412 = expsum::complete_sum(4, 1, 2);
  CHECK(std::fabs(s412.real() - 2.0) < 1e-13);
  CHECK(std::fabs(s412.imag() - 2.0) < 1e-13);
  // Cubing is a bijection mod 5, so S(5,2,3) = 0.
  auto s523 = expsum::complete_sum(5, 2, 3);
  CHECK(std::abs(s523) < 1e-12);
  // |S(q,a)| = sqrt(q) for odd prime q, gcd(a,q)=1, d=2.
  for (long long q : {7, 11, 13}) {
    CHECK(std::abs(expsum::complete_sum(q, 3, 2)) == doctest::Approx(std::sqrt((double)q)));
  }
}

TEST_CASE("complete sum is order-independent") {
  for (long long q : {12, 97, 360}) {
    auto a = expsum::complete_sum(q, 5, 2);
    for (std::uint64_t seed : {1u, 2u}) {
      auto b = expsum::complete_sum_shuffled(q, 5, 2, seed);
      CHECK(std::abs(a - b) < 1e-11);
    }
  }
}

TEST_CASE("weyl scan: quadratic normalized sup is sqrt(2), attained mod 8") {
  auto r16 = expsum::weyl_scan_q(16, 2);
  CHECK(r16.q == 16);
  CHECK(r16.max_ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r16.argmax_a % 2 == 1);
  auto r3 = expsum::weyl_scan_q(3, 2);
  CHECK(r3.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  // Frozen exhaustive max over q <= 300.
  double worst = 0.0;
  for (long long q = 1; q <= 300; ++q)
    worst = std::max(worst, expsum::weyl_scan_q(q, 2).max_ratio);
  CHECK(std::fabs(worst - oracle::kGaussRatioMaxQ300) < 1e-11);
}

TEST_CASE("sum_range matches a naive long-double loop on random phase points") {
  expsum::PowTable tab(0, 80, 2.5, 2);
  for (int i = 0; i < 25; ++i) {
    expsum::PhasePoint p{rng::uniform(31, 0, i, -0.5, 0.5), rng::uniform(31, 1, i, -0.01, 0.01)};
    long long cd = 1 + (i % 3);
    double ct = (i % 2 == 0) ? 1.0 : -2.0;
    auto v = expsum::sum_range(tab, cd, ct, p);
    auto ref = naive_sum(0, 80, cd, ct, p, 2.5, 2);
    CHECK(std::abs(v.value - ref) < 1e-8);
  }
}

TEST_CASE("box sums split as full(2 eta P) - full(eta P / 2)") {
  auto spec = quad_spec();
  std::vector<double> eta(6, 0.4);
  double P = 30.0;
  CHECK(expsum::box_lo(0.4, P) == 6);
  CHECK(expsum::box_hi(0.4, P) == 24);
  expsum::PhasePoint p{0.31, 0.0027};
  for (int idx = 0; idx < 2; ++idx) {
    for (auto kind : {expsum::SumKind::F, expsum::SumKind::G, expsum::SumKind::H}) {
      auto box = expsum::eval_box_sum(kind, idx, spec, eta, p, P);
      auto hi = expsum::eval_full_sum(kind, idx, spec, p, 2 * 0.4 * P);
      auto lo = expsum::eval_full_sum(kind, idx, spec, p, 0.4 * P / 2);
      CHECK(std::abs(box.value - (hi.value - lo.value)) < 1e-10);
      CHECK(box.terms == hi.terms - lo.terms);
    }
  }
  // G sums the y block (coefficient mu_j, theta phase only); crosscheck.
  auto g0 = expsum::eval_box_sum(expsum::SumKind::G, 0, spec, eta, p, P);
  auto ref = naive_sum(6, 24, 0, spec.mu[0], {0.0, p.alpha_theta}, 2.5, 2);
  CHECK(std::abs(g0.value - ref) < 1e-9);
}

TEST_CASE("t_factor is the normalized product of complete sums") {
  auto spec = quad_spec();
  long long q = 7, a = 3;
  std::complex<double> prod = 1.0;
  for (long long c : spec.a_coeffs) prod *= expsum::complete_sum(q, a * c % q, spec.d);
  for (long long c : spec.b_coeffs) prod *= expsum::complete_sum(q, a * c % q, spec.d);
  prod /= std::pow((double)q, 4.0);  // ell + n = 4
  auto t = expsum::t_factor(q, a, spec);
  CHECK(std::abs(t - prod) < 1e-12);
  // q=1 factor is exactly 1.
  CHECK(std::abs(expsum::t_factor(1, 0, spec) - std::complex<double>(1.0, 0.0)) < 1e-15);
}

TEST_CASE("eval_f composes both phases") {
  auto spec = quad_spec();
  expsum::PhasePoint p{0.2, 0.003};
  auto f = expsum::eval_f(p, 40, 2.5, 2);
  auto ref = naive_sum(0, 40, 1, 1.0, p, 2.5, 2);
  CHECK(std::abs(f.value - ref) < 1e-9);
  CHECK(f.terms == 40);
}
