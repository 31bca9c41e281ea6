#include "mixsys/validate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <sstream>

#include "mixsys/arcs.hpp"
#include "mixsys/expsum.hpp"
#include "mixsys/quadrature.hpp"
#include "mixsys/rng.hpp"

namespace mixsys::validate {
namespace {

constexpr std::uint64_t kScanStream = 0x4D53;
constexpr std::uint64_t kAuditStream = 0x4155;

void hypothesis_labels(const model::SystemSpec& spec, const model::DerivedParams& dp,
                       std::vector<std::string>* out) {
  auto hr = model::check_hypotheses(spec, dp);
  if (hr.all_pass) return;
  for (const model::ConditionCheck* c : {&hr.cond_b, &hr.cond_c, &hr.cond_d}) {
    if (c->pass) continue;
    std::string label = "outside theorem hypotheses: " + c->detail;
    if (spec.strict_mode) throw FeasibilityError(label);
    out->push_back(label);
  }
}

std::complex<double> unit_phase_sum_poly(double alpha, long long X, int d) {
  std::complex<double> s{0.0, 0.0};
  for (long long x = 1; x <= X; ++x) {
    double xp = 1.0;
    for (int r = 0; r < d; ++r) xp *= static_cast<double>(x);
    double c = 2.0 * 3.14159265358979323846 * std::fmod(alpha * xp, 1.0);
    s += std::complex<double>(std::cos(c), std::sin(c));
  }
  return s;
}

AuditCheck audit_weyl_squaring(int d, std::uint64_t seed) {
  AuditCheck ck;
  ck.name = "weyl-squaring";
  double alpha = rng::uniform(seed, kAuditStream, 11, 0.1, 0.9);
  long long base = d >= 3 ? 32 : 64;
  long long D = 1LL << (d - 1);
  for (int g = 0; g < 3; ++g) {
    long long X = base << g;
    double lhs = std::pow(std::abs(unit_phase_sum_poly(alpha, X, d)),
                          static_cast<double>(D));
    // (d-1)-fold difference of alpha x^d, summed over the shrunken ranges.
    std::complex<double> inner{0.0, 0.0};
    auto phase_at = [&](long long x, const std::vector<long long>& hs) {
      // iterated forward difference of x^d over offsets hs, times alpha
      // computed by inclusion-exclusion over subsets
      double total = 0.0;
      std::size_t k = hs.size();
      for (std::size_t mask = 0; mask < (1ULL << k); ++mask) {
        long long arg = x;
        int bits = 0;
        for (std::size_t b = 0; b < k; ++b)
          if (mask & (1ULL << b)) {
            arg += hs[b];
            ++bits;
          }
        double xp = 1.0;
        for (int r = 0; r < d; ++r) xp *= static_cast<double>(arg);
        total += ((static_cast<int>(k) - bits) % 2 == 0 ? 1.0 : -1.0) * xp;
      }
      return alpha * total;
    };
    std::vector<long long> hs(static_cast<std::size_t>(d - 1), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t level) {
      if (level == hs.size()) {
        long long lo = 1, hi = X;
        for (long long h : hs) {
          if (h >= 0)
            hi = std::min(hi, X - h);
          else
            lo = std::max(lo, 1 - h);
        }
        for (long long x = lo; x <= hi; ++x) {
          double c = 2.0 * 3.14159265358979323846 * std::fmod(phase_at(x, hs), 1.0);
          inner += std::complex<double>(std::cos(c), std::sin(c));
        }
        return;
      }
      for (long long h = -(X - 1); h <= X - 1; ++h) {
        hs[level] = h;
        rec(level + 1);
      }
    };
    rec(0);
    double rhs = std::pow(static_cast<double>(X), static_cast<double>(D - 1)) +
                 std::pow(static_cast<double>(X), static_cast<double>(D - d)) *
                     std::abs(inner);
    ck.ratios.push_back(lhs / rhs);
  }
  return ck;
}

AuditCheck audit_van_der_corput() {
  AuditCheck ck;
  ck.name = "van-der-corput";
  const int q = 1;
  double denom = std::pow(2.0, q + 2) - 2.0;  // 6
  for (int g = 0; g < 3; ++g) {
    long long X = 256LL << g;
    double F = std::pow(static_cast<double>(X), 1.5);
    std::complex<double> s{0.0, 0.0};
    for (long long x = X / 2 + 1; x <= X; ++x) {
      double f = F * std::pow(static_cast<double>(x) / static_cast<double>(X), 2.5);
      double c = 2.0 * 3.14159265358979323846 * std::fmod(f, 1.0);
      s += std::complex<double>(std::cos(c), std::sin(c));
    }
    double rhs = std::pow(F, 1.0 / denom) *
                     std::pow(static_cast<double>(X), 1.0 - (q + 2) / denom) +
                 static_cast<double>(X) / F;
    ck.ratios.push_back(std::abs(s) / rhs);
  }
  return ck;
}

AuditCheck audit_autocorrelation(std::uint64_t seed) {
  AuditCheck ck;
  ck.name = "autocorrelation-smoothing";
  ck.exact = true;
  ck.bound = 1.0;
  const long long N = 200;
  std::vector<std::complex<double>> w(static_cast<std::size_t>(N));
  for (long long n = 0; n < N; ++n) {
    double ph = 2.0 * 3.14159265358979323846 *
                rng::uniform(seed, kAuditStream, 100 + static_cast<std::uint64_t>(n), 0.0, 1.0);
    w[static_cast<std::size_t>(n)] = {std::cos(ph), std::sin(ph)};
  }
  std::complex<double> total{0.0, 0.0};
  for (const auto& v : w) total += v;
  double lhs = std::norm(total);
  for (long long H : {5LL, 20LL, 50LL}) {
    double corr = 0.0;
    for (long long h = -(H - 1); h <= H - 1; ++h) {
      std::complex<double> a{0.0, 0.0};
      for (long long n = 0; n < N; ++n) {
        long long p = n - h;
        if (p < 0 || p >= N) continue;
        a += w[static_cast<std::size_t>(n)] * std::conj(w[static_cast<std::size_t>(p)]);
      }
      corr += (1.0 - std::abs(static_cast<double>(h)) / static_cast<double>(H)) * a.real();
    }
    double rhs = (static_cast<double>(N + H) / static_cast<double>(H)) * corr;
    ck.ratios.push_back(lhs / rhs);
  }
  return ck;
}

AuditCheck audit_rational_spacing() {
  AuditCheck ck;
  ck.name = "rational-spacing-sum";
  const double alpha = std::sqrt(2.0) - 1.0;
  const double beta = 1.0 / 3.0;
  for (int g = 0; g < 3; ++g) {
    long long R = 256LL << g;
    long long N = R;
    double lhs = 0.0;
    for (long long z = 1; z <= R; ++z) {
      double v = alpha * static_cast<double>(z) + beta;
      double dist = std::abs(v - std::nearbyint(v));
      lhs += std::min(static_cast<double>(N), 1.0 / std::max(dist, 1e-300));
    }
    arcs::Rational rat = arcs::nearest_rational(alpha, R);
    double q = static_cast<double>(rat.q);
    double rhs = (static_cast<double>(N) + q * std::log(std::max(q, 2.0))) *
                 (static_cast<double>(R) / q + 1.0);
    ck.ratios.push_back(lhs / rhs);
  }
  return ck;
}

AuditCheck audit_sum_vs_integral(double theta) {
  AuditCheck ck;
  ck.name = "sum-vs-integral";
  ck.exact = true;
  ck.bound = 2.0;
  for (int g = 0; g < 3; ++g) {
    long long P = 100LL << g;
    double b = 2.0 * static_cast<double>(P);
    double c = 0.4 / (theta * std::pow(b, theta - 1.0));  // |f'| <= 0.4 < 1
    std::complex<double> sum{0.0, 0.0};
    for (long long x = P + 1; x <= 2 * P; ++x) {
      double f = c * std::pow(static_cast<double>(x), theta);
      double cy = 2.0 * 3.14159265358979323846 * std::fmod(f, 1.0);
      sum += std::complex<double>(std::cos(cy), std::sin(cy));
    }
    auto res = quad::integrate_adaptive(
        [&](double t) {
          double f = c * std::pow(t, theta);
          double cy = 2.0 * 3.14159265358979323846 * std::fmod(f, 1.0);
          return std::complex<double>(std::cos(cy), std::sin(cy));
        },
        static_cast<double>(P), b, 1e-10, 1e-10);
    ck.ratios.push_back(std::abs(sum - res.value));
  }
  return ck;
}

// Approximation of the three box sums on a major arc by the rational factor
// times the oscillatory integral, each against its own power bound.
std::vector<AuditCheck> audit_major_arc_approx(const model::SystemSpec& spec,
                                               const std::vector<double>& eta) {
  auto dp = model::derive_params(spec);
  integral::QuadratureConfig qcfg;
  qcfg.abs_tol = 1e-10;
  AuditCheck f_ck, g_ck, h_ck;
  f_ck.name = "major-arc-approximation-f";
  g_ck.name = "major-arc-approximation-g";
  h_ck.name = "major-arc-approximation-h";
  const long long q = 3, a = 1;
  std::size_t ell = spec.lambda.size(), m = spec.mu.size();
  for (int g = 0; g < 3; ++g) {
    long long P = 40LL << g;
    double Pd = static_cast<double>(P);
    double width = std::pow(Pd, -spec.d + dp.xi_used);
    double beta_d = 0.3 * width;
    double alpha_theta = 0.5 * std::pow(Pd, -spec.theta + dp.delta0);
    expsum::PhasePoint p{static_cast<double>(a) / static_cast<double>(q) + beta_d,
                         alpha_theta};
    double worst_f = 0.0, worst_g = 0.0, worst_h = 0.0;
    for (std::size_t i = 0; i < ell; ++i) {
      auto exact = expsum::eval_box_sum(expsum::SumKind::F, static_cast<int>(i), spec,
                                        eta, p, Pd);
      double lo = eta[i] * Pd / 2.0, hi = 2.0 * eta[i] * Pd;
      std::complex<double> v = integral::v_function(
          lo, hi, static_cast<double>(spec.a_coeffs[i]) * beta_d, spec.d,
          spec.lambda[i] * alpha_theta, spec.theta, qcfg);
      std::complex<double> star =
          expsum::complete_sum(q, ((a * spec.a_coeffs[i]) % q + q) % q, spec.d) * v /
          static_cast<double>(q);
      worst_f = std::max(worst_f, std::abs(exact.value - star));
    }
    for (std::size_t j = 0; j < m; ++j) {
      auto exact = expsum::eval_box_sum(expsum::SumKind::G, static_cast<int>(j), spec,
                                        eta, p, Pd);
      double lo = eta[ell + j] * Pd / 2.0, hi = 2.0 * eta[ell + j] * Pd;
      std::complex<double> star = integral::v_function(
          lo, hi, 0.0, spec.d, spec.mu[j] * alpha_theta, spec.theta, qcfg);
      worst_g = std::max(worst_g, std::abs(exact.value - star));
    }
    for (std::size_t k = 0; k < spec.b_coeffs.size(); ++k) {
      auto exact = expsum::eval_box_sum(expsum::SumKind::H, static_cast<int>(k), spec,
                                        eta, p, Pd);
      double lo = eta[ell + m + k] * Pd / 2.0, hi = 2.0 * eta[ell + m + k] * Pd;
      std::complex<double> v = integral::v_function(
          lo, hi, static_cast<double>(spec.b_coeffs[k]) * beta_d, spec.d, 0.0,
          spec.theta, qcfg);
      std::complex<double> star =
          expsum::complete_sum(q, ((a * spec.b_coeffs[k]) % q + q) % q, spec.d) * v /
          static_cast<double>(q);
      worst_h = std::max(worst_h, std::abs(exact.value - star));
    }
    f_ck.ratios.push_back(worst_f / std::pow(Pd, dp.delta0 + dp.xi_used));
    g_ck.ratios.push_back(worst_g);
    h_ck.ratios.push_back(worst_h / std::pow(Pd, 2.0 * dp.xi_used));
  }
  return {f_ck, g_ck, h_ck};
}

void finish_check(AuditCheck* ck) {
  if (ck->ratios.empty()) {
    ck->pass = false;
    return;
  }
  if (ck->exact) {
    ck->pass = true;
    for (double r : ck->ratios)
      if (!(r <= ck->bound)) ck->pass = false;
    return;
  }
  double mx = *std::max_element(ck->ratios.begin(), ck->ratios.end());
  double mn = *std::min_element(ck->ratios.begin(), ck->ratios.end());
  ck->pass = mx <= 3.0 * mn || mx < 1e-9;
}

}  // namespace

double Prediction::at(double P) const { return constant * std::pow(P, exponent); }

Prediction predict(const model::SystemSpec& spec, const std::vector<double>& eta,
                   long long series_q, const integral::QuadratureConfig& qcfg,
                   int threads) {
  model::validate(spec);
  auto dp = model::derive_params(spec);
  Prediction pr;
  pr.exponent = static_cast<double>(dp.s) - spec.theta - static_cast<double>(spec.d);
  pr.series_q = series_q;
  hypothesis_labels(spec, dp, &pr.warnings);

  auto j0 = integral::j_zero(spec, eta, 1.0, qcfg, threads);
  pr.j0 = j0.value;
  auto ss = series::singular_series(spec, series_q, threads);
  pr.series_sum = ss.partial_sum;
  pr.series_tail = ss.tail_bound;
  pr.series_tail_divergent = ss.divergent_tail;
  if (ss.divergent_tail)
    pr.warnings.push_back(
        "series tail bound diverges at this variable count; using the partial sum");
  pr.constant = 2.0 * spec.tau * pr.j0 * pr.series_sum;
  if (!(pr.constant > 0.0))
    pr.warnings.push_back("nonpositive density product; prediction is degenerate");
  return pr;
}

LineFit fit_line(const std::vector<std::pair<double, double>>& xy) {
  LineFit f;
  f.points = static_cast<int>(xy.size());
  if (xy.size() < 2) return f;
  double sx = 0, sy = 0;
  for (auto& p : xy) {
    sx += p.first;
    sy += p.second;
  }
  double mx = sx / xy.size(), my = sy / xy.size();
  double sxx = 0, sxy = 0;
  for (auto& p : xy) {
    sxx += (p.first - mx) * (p.first - mx);
    sxy += (p.first - mx) * (p.second - my);
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (xy.size() > 2) {
    double ss = 0;
    for (auto& p : xy) {
      double r = p.second - (f.intercept + f.slope * p.first);
      ss += r * r;
    }
    f.stderr_slope = std::sqrt(ss / (xy.size() - 2) / sxx);
  }
  return f;
}

ScalingReport validate_scaling(const model::SystemSpec& spec,
                               const std::vector<double>& eta,
                               const std::vector<long long>& ps, long long series_q,
                               const integral::QuadratureConfig& qcfg,
                               counting::Method method, int threads) {
  model::validate(spec);
  auto dp = model::derive_params(spec);
  ScalingReport rep;
  rep.expected_exponent =
      static_cast<double>(dp.s) - spec.theta - static_cast<double>(spec.d);
  hypothesis_labels(spec, dp, &rep.labels);

  try {
    rep.pred = predict(spec, eta, series_q, qcfg, threads);
    rep.prediction_available = true;
    for (const auto& w : rep.pred.warnings) rep.labels.push_back(w);
  } catch (const integral::NotAbsolutelyConvergent& e) {
    rep.prediction_available = false;
    rep.labels.push_back(std::string("prediction unavailable: ") + e.what());
  }

  std::vector<std::pair<double, double>> fit_pts;
  for (long long P : ps) {
    auto cr = counting::count_solutions(spec, eta, P, method, threads);
    Row row;
    row.P = P;
    row.n_exact = cr.count;
    row.elapsed_ms = static_cast<double>(cr.elapsed_ms);
    if (rep.prediction_available) {
      row.n_pred = rep.pred.at(static_cast<double>(P));
      row.ratio = row.n_pred != 0.0
                      ? static_cast<double>(row.n_exact) / row.n_pred
                      : std::numeric_limits<double>::quiet_NaN();
    } else {
      row.n_pred = std::numeric_limits<double>::quiet_NaN();
      row.ratio = std::numeric_limits<double>::quiet_NaN();
    }
    rep.rows.push_back(row);
    if (cr.count > 0)
      fit_pts.emplace_back(std::log(static_cast<double>(P)),
                           std::log(static_cast<double>(cr.count)));
    else
      rep.labels.push_back("P=" + std::to_string(P) +
                           " has zero exact solutions; excluded from the fit");
  }
  rep.exact_fit = fit_line(fit_pts);
  return rep;
}

SupScan minor_arc_sup_scan(const model::SystemSpec& spec, const std::vector<double>& eta,
                           long long P, long long samples, std::uint64_t seed) {
  model::validate(spec);
  auto dp = model::derive_params(spec);
  auto params = arcs::make_dissection(static_cast<double>(P), spec, dp);
  double Pd = static_cast<double>(P);
  double lo_mag = params.m_lower(), hi_mag = params.m_upper();
  double bound_ineq = std::pow(Pd, 1.0 - dp.eta1);
  double denom = spec.d == 2 ? 2.0 : std::pow(2.0, spec.d - 3);
  double bound_rat = std::pow(Pd, 1.0 - dp.xi_used / denom);

  SupScan out;
  out.P = P;
  out.samples = samples;
  std::size_t ell = spec.lambda.size();
  for (long long k = 0; k < samples; ++k) {
    std::uint64_t c = static_cast<std::uint64_t>(k);
    double u = rng::uniform(seed, kScanStream, 5 * c, 0.0, 1.0);
    double sgn = rng::uniform(seed, kScanStream, 5 * c + 1, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    double mag = std::exp(std::log(lo_mag) + u * (std::log(hi_mag) - std::log(lo_mag)));
    expsum::PhasePoint p1{rng::uniform(seed, kScanStream, 5 * c + 2, 0.0, 1.0),
                          sgn * mag};
    if (arcs::classify(p1, params).kind == arcs::ArcKind::MinorInequality) {
      for (std::size_t i = 0; i < ell; ++i) {
        auto v = expsum::eval_box_sum(expsum::SumKind::F, static_cast<int>(i), spec,
                                      eta, p1, Pd);
        out.ratio_inequality_region =
            std::max(out.ratio_inequality_region, std::abs(v.value) / bound_ineq);
      }
    }
    double v2 = rng::uniform(seed, kScanStream, 5 * c + 3, -0.99, 0.99);
    expsum::PhasePoint p2{rng::uniform(seed, kScanStream, 5 * c + 4, 0.0, 1.0),
                          v2 * lo_mag};
    if (arcs::classify(p2, params).kind == arcs::ArcKind::MinorRational) {
      for (std::size_t i = 0; i < ell; ++i) {
        auto v = expsum::eval_box_sum(expsum::SumKind::F, static_cast<int>(i), spec,
                                      eta, p2, Pd);
        out.ratio_rational_region =
            std::max(out.ratio_rational_region, std::abs(v.value) / bound_rat);
      }
    }
  }
  return out;
}

std::vector<AuditCheck> inequality_audit(const model::SystemSpec& spec,
                                         const std::vector<double>& eta,
                                         std::uint64_t seed) {
  model::validate(spec);
  std::vector<AuditCheck> checks;
  checks.push_back(audit_weyl_squaring(spec.d, seed));
  checks.push_back(audit_van_der_corput());
  checks.push_back(audit_autocorrelation(seed));
  checks.push_back(audit_rational_spacing());
  checks.push_back(audit_sum_vs_integral(spec.theta));
  for (auto& ck : audit_major_arc_approx(spec, eta)) checks.push_back(ck);

  AuditCheck ineq, rat;
  ineq.name = "minor-inequality-sup";
  rat.name = "minor-rational-sup";
  for (int g = 0; g < 3; ++g) {
    long long P = 40LL << g;
    auto scan = minor_arc_sup_scan(spec, eta, P, 96, seed);
    ineq.ratios.push_back(scan.ratio_inequality_region);
    rat.ratios.push_back(scan.ratio_rational_region);
  }
  checks.push_back(ineq);
  checks.push_back(rat);

  for (auto& ck : checks) finish_check(&ck);
  return checks;
}

}  // namespace mixsys::validate
