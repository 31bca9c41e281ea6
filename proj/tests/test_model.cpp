#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "mixsys/model.hpp"
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

}  // namespace

TEST_CASE("derived block sizes and windows for the desk system") {
  auto spec = quad_spec();
  model::validate(spec);
  auto p = model::derive_params(spec);
  CHECK(p.a_theta == 42);  // floor(2*theta)=5 -> 6*7
  CHECK(p.a_d == 4);
  CHECK(p.s == 6);
  CHECK(p.delta0 == 0.0625);  // 2^{1-2*theta} = 2^{-4}
  CHECK(p.xi_theoretical == doctest::Approx(0.0625 / 8).epsilon(1e-15));
  CHECK(p.eta1 == doctest::Approx(std::pow(6.0, -4.5)).epsilon(1e-15));
  CHECK(p.omega_used == 0.05);
  CHECK(p.xi_used == 0.02);
  CHECK(p.delta_cap == doctest::Approx(0.2).epsilon(1e-12));
  // Effective overrides take precedence.
  auto p2 = model::derive_params(spec, {0.03, 0.01});
  CHECK(p2.omega_used == 0.03);
  CHECK(p2.xi_used == 0.01);
}

TEST_CASE("single-pair system has a negative kernel-decay cap") {
  model::SystemSpec s;
  s.theta = 2.5;
  s.d = 2;
  s.lambda = {1.0};
  s.mu = {-1.0};
  s.a_coeffs = {1};
  s.b_coeffs = {-1};
  s.tau = 0.5;
  s.strict_mode = false;
  auto p = model::derive_params(s);
  CHECK(p.delta_cap == doctest::Approx(-0.4).epsilon(1e-12));
}

TEST_CASE("hypothesis conditions pass and fail where they should") {
  // theta=2.5, d=2 at full scale: s = 45 sits exactly in the count window
  // and ell+m = 43 >= a_theta + 1.
  auto r = model::check_hypotheses(2.5, 2, 41, 2, 2);
  CHECK(r.cond_b.pass);
  CHECK(r.cond_c.pass);
  CHECK(r.cond_d.pass);
  CHECK(r.all_pass);
  // The desk-scale system passes the structural floor but sits far below the
  // block-size and count-window thresholds.
  auto desk = model::check_hypotheses(2.5, 2, 2, 2, 2);
  CHECK(desk.cond_b.pass);
  CHECK_FALSE(desk.cond_c.pass);
  CHECK_FALSE(desk.cond_d.pass);
  CHECK_FALSE(desk.all_pass);
  // Shrinking a block below its floor breaks the first condition.
  CHECK_FALSE(model::check_hypotheses(2.5, 2, 0, 2, 1).cond_b.pass);
}

TEST_CASE("holder weights: frozen desk case") {
  double delta = std::pow(6.0, -2.5);
  auto w = model::holder_weights(2.5, 2, 2, 2, 2, 6, delta);
  CHECK(std::fabs(w.w[0] - oracle::kWeightsDeskW1) < 1e-12);
  CHECK(std::fabs(w.w[1] - oracle::kWeightsDeskW2) < 1e-12);
  CHECK(std::fabs(w.w[2] - oracle::kWeightsDeskW3) < 1e-12);
  CHECK(std::fabs(w.w[3] - oracle::kWeightsDeskW4) < 1e-12);
  CHECK_FALSE(w.feasible);  // weights fall outside [0,1] at desk scale
}

TEST_CASE("holder weights: frozen feasible case and defining equations") {
  // theta=2.5 (A_theta=42), d=6 (A_d=36), blocks sized so every weight lands
  // inside [0,1].
  double theta = 2.5, delta = 1.0 / 6.0;
  int d = 6;
  long long ell = 25, m = 20, n = 30, s = 75;
  auto w = model::holder_weights(theta, d, ell, m, n, s, delta);
  CHECK(std::fabs(w.w[0] - oracle::kWeightsFeasW1) < 1e-12);
  CHECK(std::fabs(w.w[1] - oracle::kWeightsFeasW2) < 1e-12);
  CHECK(std::fabs(w.w[2] - oracle::kWeightsFeasW3) < 1e-12);
  CHECK(std::fabs(w.w[3] - oracle::kWeightsFeasW4) < 1e-12);
  CHECK(w.feasible);
  for (int i = 0; i < 4; ++i) {
    CHECK(w.w[i] >= 0.0);
    CHECK(w.w[i] <= 1.0);
  }
  // The four defining identities, evaluated directly.
  double a_t = 42.0, a_d = 36.0;
  CHECK(std::fabs(a_t * w.w[0] + a_d * w.w[1] + a_t * w.w[2] - (ell - delta)) < 1e-10);
  CHECK(std::fabs(a_t * w.w[1] + a_t * w.w[3] - m) < 1e-10);
  CHECK(std::fabs(a_d * w.w[2] + a_d * w.w[3] - n) < 1e-10);
  CHECK(std::fabs(w.w[0] + w.w[1] + w.w[2] + w.w[3] - 1.0) < 1e-10);
  CHECK(w.s_prime == doctest::Approx(s - delta));
}

TEST_CASE("count window bounds are the ceil/floor of the feasibility interval") {
  auto spec = quad_spec();
  auto p = model::derive_params(spec);
  // For theta=2.5, d=2, m=n=2: lower max{44, ceil(1772/42)}=44, upper
  // min{46, 42+0+2}=44; both shifted one past the exclusive end.
  CHECK(p.s_min == 45);
  CHECK(p.s_max == 45);
}

TEST_CASE("spec json round-trip preserves every field") {
  auto spec = quad_spec();
  spec.omega_effective = 0.041;
  spec.xi_effective = 0.017;
  auto j = model::spec_to_json(spec);
  auto back = model::spec_from_json(j);
  CHECK(back.theta == spec.theta);
  CHECK(back.d == spec.d);
  CHECK(back.lambda == spec.lambda);
  CHECK(back.mu == spec.mu);
  CHECK(back.a_coeffs == spec.a_coeffs);
  CHECK(back.b_coeffs == spec.b_coeffs);
  CHECK(back.tau == spec.tau);
  CHECK(back.strict_mode == spec.strict_mode);
  CHECK(back.omega_effective == spec.omega_effective);
  CHECK(back.xi_effective == spec.xi_effective);
}

TEST_CASE("validate rejects malformed systems") {
  auto spec = quad_spec();
  spec.tau = -1.0;
  CHECK_THROWS_AS(model::validate(spec), model::InvalidSpec);
  spec = quad_spec();
  spec.theta = 2.0;  // integer theta
  CHECK_THROWS_AS(model::validate(spec), model::InvalidSpec);
  spec = quad_spec();
  spec.d = 0;
  CHECK_THROWS_AS(model::validate(spec), model::InvalidSpec);
  spec = quad_spec();
  spec.a_coeffs = {0, 0};
  CHECK_THROWS_AS(model::validate(spec), model::InvalidSpec);
  // Strict mode enforces the full count window, which the desk system misses.
  spec = quad_spec();
  spec.strict_mode = true;
  CHECK_THROWS_AS(model::validate(spec), model::InvalidSpec);
}

TEST_CASE("default holder delta") {
  CHECK(model::default_holder_delta(2.5) == doctest::Approx(std::pow(6.0, -2.5)));
}
