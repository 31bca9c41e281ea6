#include "mixsys/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mixsys::model {

namespace {

long long ceil_div(long long num, long long den) { return (num + den - 1) / den; }

bool has_both_signs(const std::vector<double>& u, const std::vector<double>& v) {
  bool pos = false, neg = false;
  for (double x : u) (x > 0 ? pos : neg) = true;
  for (double x : v) (x > 0 ? pos : neg) = true;
  return pos && neg;
}

}  // namespace

void validate(const SystemSpec& spec) {
  if (!(spec.theta > 1.0)) throw InvalidSpec("theta must exceed 1");
  if (spec.theta == std::floor(spec.theta)) throw InvalidSpec("theta must be non-integral");
  if (spec.d < 2) throw InvalidSpec("d must be an integer >= 2");
  if (spec.strict_mode && !(spec.theta > spec.d + 1))
    throw InvalidSpec("strict_mode requires theta > d + 1");
  if (!(spec.tau > 0)) throw InvalidSpec("tau must be positive");
  if (spec.a_coeffs.size() != spec.lambda.size())
    throw InvalidSpec("a_coeffs must pair with lambda (one per shared variable)");
  for (double x : spec.lambda)
    if (x == 0) throw InvalidSpec("lambda coefficients must be nonzero");
  for (double x : spec.mu)
    if (x == 0) throw InvalidSpec("mu coefficients must be nonzero");
  for (long long x : spec.a_coeffs)
    if (x == 0) throw InvalidSpec("a coefficients must be nonzero");
  for (long long x : spec.b_coeffs)
    if (x == 0) throw InvalidSpec("b coefficients must be nonzero");
  std::vector<double> av(spec.a_coeffs.begin(), spec.a_coeffs.end());
  std::vector<double> bv(spec.b_coeffs.begin(), spec.b_coeffs.end());
  if (!has_both_signs(spec.lambda, spec.mu))
    throw InvalidSpec("lambda and mu together must contain both signs");
  if (!has_both_signs(av, bv))
    throw InvalidSpec("a and b together must contain both signs");
  if (spec.lambda.empty() && spec.mu.empty())
    throw InvalidSpec("the inequality form needs at least one variable");
}

SystemSpec spec_from_json(const nlohmann::json& j) {
  SystemSpec s;
  s.theta = j.at("theta").get<double>();
  s.d = j.at("d").get<int>();
  s.lambda = j.at("lambda").get<std::vector<double>>();
  s.mu = j.value("mu", std::vector<double>{});
  s.a_coeffs = j.at("a").get<std::vector<long long>>();
  s.b_coeffs = j.value("b", std::vector<long long>{});
  s.tau = j.value("tau", 1.0);
  s.strict_mode = j.value("strict_mode", true);
  s.omega_effective = j.value("omega_effective", 0.05);
  s.xi_effective = j.value("xi_effective", 0.02);
  return s;
}

nlohmann::json spec_to_json(const SystemSpec& s) {
  nlohmann::json j;
  j["theta"] = s.theta;
  j["d"] = s.d;
  j["lambda"] = s.lambda;
  j["mu"] = s.mu;
  j["a"] = s.a_coeffs;
  j["b"] = s.b_coeffs;
  j["tau"] = s.tau;
  j["strict_mode"] = s.strict_mode;
  j["omega_effective"] = s.omega_effective;
  j["xi_effective"] = s.xi_effective;
  return j;
}

DerivedParams derive_params(const SystemSpec& spec, const EffectiveOverrides& ov) {
  validate(spec);
  DerivedParams p;
  double theta = spec.theta;
  long long f2t = static_cast<long long>(std::floor(2.0 * theta));
  p.a_theta = (f2t + 1) * (f2t + 2);
  p.a_d = static_cast<long long>(spec.d) * spec.d;
  p.s = spec.s();
  long long m = spec.m(), n = spec.n(), ell = spec.ell();
  // s_min and s_max evaluated verbatim, in exact integer arithmetic.
  long long cand1 = p.a_theta + n;
  long long cand2 = ceil_div(p.a_d * m + p.a_theta * p.a_theta, p.a_theta);
  p.s_min = std::max(cand1, cand2) + 1;
  long long cand3 = p.a_theta + p.a_d;
  long long cand4 = p.a_theta + (p.a_d * m) / p.a_theta + n;
  p.s_max = std::min(cand3, cand4) + 1;

  p.gamma_frac = theta - std::floor(theta);
  p.delta0 = std::exp2(1.0 - 2.0 * theta);
  double log5 = std::log(5.0);
  p.log5_omega = std::min(std::log((1.0 - p.gamma_frac) / 12.0) / log5,
                          -100.0 * (theta + spec.d));
  p.omega_used = ov.omega >= 0 ? ov.omega : spec.omega_effective;
  p.xi_theoretical = p.delta0 / 8.0;
  p.xi_used = ov.xi >= 0 ? ov.xi : spec.xi_effective;
  p.eta1 = std::exp(-(theta + spec.d) * std::log(6.0));
  double lt = static_cast<double>(ell);
  p.delta_cap = std::min(m / theta + lt / (2.0 * theta) - 1.0,
                         static_cast<double>(n) / spec.d + lt / (2.0 * theta) - 1.0);
  return p;
}

HypothesisReport check_hypotheses(double theta, int d, long long ell, long long m,
                                  long long n) {
  HypothesisReport r;
  long long f2t = static_cast<long long>(std::floor(2.0 * theta));
  long long a_theta = (f2t + 1) * (f2t + 2);
  long long a_d = static_cast<long long>(d) * d;

  long long ell_floor = std::max<long long>(
      static_cast<long long>(std::ceil(2.0 * theta * (1.0 - static_cast<double>(n) / d))), 1);
  {
    std::ostringstream os;
    bool ok = ell >= ell_floor && m >= 0 && m <= a_theta && n >= 0 && n <= a_d;
    os << "ell=" << ell << " vs floor " << ell_floor << "; m=" << m << " in [0," << a_theta
       << "]; n=" << n << " in [0," << a_d << "]";
    r.cond_b = {ok, os.str()};
  }
  {
    std::ostringstream os;
    bool ok = ell + m >= a_theta + 1 && ell + n >= a_d + 1;
    os << "ell+m=" << (ell + m) << " vs " << (a_theta + 1) << "; ell+n=" << (ell + n)
       << " vs " << (a_d + 1);
    r.cond_c = {ok, os.str()};
  }
  {
    long long s = ell + m + n;
    long long s_min = std::max(a_theta + n, ceil_div(a_d * m + a_theta * a_theta, a_theta)) + 1;
    long long s_max = std::min(a_theta + a_d, a_theta + (a_d * m) / a_theta + n) + 1;
    std::ostringstream os;
    bool ok = s >= s_min && s <= s_max;
    os << "s=" << s << " vs [" << s_min << "," << s_max << "]";
    r.cond_d = {ok, os.str()};
  }
  r.all_pass = r.cond_b.pass && r.cond_c.pass && r.cond_d.pass;
  return r;
}

HypothesisReport check_hypotheses(const SystemSpec& spec, const DerivedParams&) {
  return check_hypotheses(spec.theta, spec.d, spec.ell(), spec.m(), spec.n());
}

HolderWeights holder_weights(double theta, int d, long long /*ell*/, long long m, long long n,
                             long long s, double delta) {
  long long f2t = static_cast<long long>(std::floor(2.0 * theta));
  double a_theta = static_cast<double>((f2t + 1) * (f2t + 2));
  double a_d = static_cast<double>(d) * d;
  HolderWeights w;
  w.delta = delta;
  w.s_prime = static_cast<double>(s) - delta;
  double x = (w.s_prime - a_theta) / a_d;
  w.w[0] = 1.0 - x;
  w.w[1] = x - static_cast<double>(n) / a_d;
  w.w[2] = x - static_cast<double>(m) / a_theta;
  w.w[3] = static_cast<double>(m) / a_theta + static_cast<double>(n) / a_d - x;
  w.feasible = w.w[0] > 0 && w.w[1] > 0 && w.w[2] > 0 && w.w[3] > 0;
  return w;
}

HolderWeights holder_weights(const SystemSpec& spec, const DerivedParams& params, double delta) {
  return holder_weights(spec.theta, spec.d, spec.ell(), spec.m(), spec.n(), params.s, delta);
}

double default_holder_delta(double theta) { return std::exp(-theta * std::log(6.0)); }

}  // namespace mixsys::model
