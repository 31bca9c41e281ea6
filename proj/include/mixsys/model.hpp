#pragma once
// System description and derived parameters for the mixed system
//   |lambda_1 x_1^theta + ... + mu_m y_m^theta| < tau,
//   a_1 x_1^d + ... + b_n z_n^d = 0.
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mixsys::model {

struct InvalidSpec : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SystemSpec {
  double theta = 0.0;
  int d = 0;
  std::vector<double> lambda;     // theta-form coefficients on the x block
  std::vector<double> mu;         // theta-form coefficients on the y block
  std::vector<long long> a_coeffs;  // d-form coefficients on the x block
  std::vector<long long> b_coeffs;  // d-form coefficients on the z block
  double tau = 1.0;
  bool strict_mode = true;
  double omega_effective = 0.05;
  double xi_effective = 0.02;

  long long ell() const { return static_cast<long long>(lambda.size()); }
  long long m() const { return static_cast<long long>(mu.size()); }
  long long n() const { return static_cast<long long>(b_coeffs.size()); }
  long long s() const { return ell() + m() + n(); }
};

// Throws InvalidSpec naming the violated condition.
void validate(const SystemSpec& spec);

SystemSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const SystemSpec& spec);

struct DerivedParams {
  long long a_theta = 0;
  long long a_d = 0;
  long long s = 0;
  long long s_min = 0;
  long long s_max = 0;
  double gamma_frac = 0.0;
  double delta0 = 0.0;
  double log5_omega = 0.0;  // theoretical omega in log base 5 (underflows as a plain real)
  double omega_used = 0.0;
  double xi_theoretical = 0.0;  // delta0/8, the largest admissible xi
  double xi_used = 0.0;
  double eta1 = 0.0;  // 6^{-theta-d}
  double delta_cap = 0.0;  // decay exponent of the kernel envelope; may be <= 0
};

struct EffectiveOverrides {
  double omega = -1.0;  // negative = keep spec value
  double xi = -1.0;
};

DerivedParams derive_params(const SystemSpec& spec, const EffectiveOverrides& ov = {});

struct ConditionCheck {
  bool pass = false;
  std::string detail;
};

struct HypothesisReport {
  ConditionCheck cond_b, cond_c, cond_d;
  std::string cond_a_note = "external: see anchor-solver";
  bool all_pass = false;
};

// Raw arithmetic on the counts; usable for boundary cases that cannot form a
// valid SystemSpec (e.g. ell = 0 with a single-sign mu block).
HypothesisReport check_hypotheses(double theta, int d, long long ell, long long m,
                                  long long n);
HypothesisReport check_hypotheses(const SystemSpec& spec, const DerivedParams& params);

struct HolderWeights {
  double w[4] = {0, 0, 0, 0};
  double delta = 0.0;
  double s_prime = 0.0;
  bool feasible = false;
};

// Closed-form solution of the 4x4 weight system; delta in [0, 1/3).
HolderWeights holder_weights(double theta, int d, long long ell, long long m, long long n,
                             long long s, double delta);
HolderWeights holder_weights(const SystemSpec& spec, const DerivedParams& params, double delta);

// Default Holder delta: 6^{-theta}.
double default_holder_delta(double theta);

}  // namespace mixsys::model
