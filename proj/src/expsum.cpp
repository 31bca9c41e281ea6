#include "mixsys/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mixsys/rng.hpp"
#include "mixsys/simd.hpp"

namespace mixsys::expsum {
namespace {

// Relative error budget for one assembled phase: dd pow carries ~5e-30, the
// two products and the sum a few ulps more.
constexpr double kPhaseRelErr = 1e-28;
constexpr double kPhaseErrCeiling = 1e-6;  // cycles; above this the sum is garbage

long long checked_ipow(long long x, int d) {
  long long r = 1;
  for (int i = 0; i < d; ++i) {
    if (x != 0 && std::llabs(r) > (1LL << 62) / std::llabs(x))
      throw BudgetError("integer power exceeds 64-bit range");
    r *= x;
  }
  return r;
}

long long mulmod(long long a, long long b, long long q) {
  return static_cast<long long>(static_cast<__int128>(a) * b % q);
}

long long powmod(long long z, int d, long long q) {
  long long r = 1 % q;
  for (int i = 0; i < d; ++i) r = mulmod(r, z, q);
  return r;
}

}  // namespace

PowTable::PowTable(long long lo_, long long hi_, double theta_, int d_)
    : lo(lo_), hi(hi_), theta(theta_), d(d_) {
  if (hi < lo) hi = lo;
  long long count = hi - lo;
  pow_theta.reserve(static_cast<std::size_t>(count));
  pow_d.reserve(static_cast<std::size_t>(count));
  dd::DD th{theta};
  for (long long x = lo + 1; x <= hi; ++x) {
    pow_theta.push_back(dd::pow(dd::DD{static_cast<double>(x)}, th));
    pow_d.push_back(checked_ipow(x, d));
  }
}

ExpSumValue sum_range(const PowTable& tab, long long coeff_d, double coeff_theta,
                      PhasePoint p) {
  ExpSumValue out;
  out.terms = tab.hi - tab.lo;
  if (out.terms <= 0) {
    out.terms = 0;
    return out;
  }
  if (!tab.pow_d.empty() && coeff_d != 0) {
    long long pmax = std::max(std::llabs(tab.pow_d.front()), std::llabs(tab.pow_d.back()));
    if (pmax > 0 && std::llabs(coeff_d) > (1LL << 62) / pmax)
      throw BudgetError("coefficient times power exceeds 64-bit range");
  }
  dd::DD ct = dd::mul(dd::DD{p.alpha_theta}, coeff_theta);
  std::vector<double> cycles(static_cast<std::size_t>(out.terms));
  double max_mag = 0.0;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    dd::DD ph_d = coeff_d == 0
                      ? dd::DD{0.0}
                      : dd::mul(dd::DD{p.alpha_d}, dd::from_i64(tab.pow_d[i] * coeff_d));
    dd::DD ph_t = dd::mul(ct, tab.pow_theta[i]);
    dd::DD ph = dd::add(ph_d, ph_t);
    max_mag = std::max(max_mag, std::abs(ph_d.hi) + std::abs(ph_t.hi));
    cycles[i] = dd::fract(ph).to_double();
  }
  out.max_phase_error = max_mag * kPhaseRelErr;
  if (out.max_phase_error > kPhaseErrCeiling) {
    std::ostringstream msg;
    msg << "phase error bound " << out.max_phase_error << " cycles exceeds "
        << kPhaseErrCeiling;
    throw PrecisionExceeded(msg.str());
  }
  out.value = simd::phase_sum(cycles.data(), nullptr, cycles.size());
  return out;
}

ExpSumValue eval_f(PhasePoint p, long long P, double theta, int d) {
  PowTable tab(0, P, theta, d);
  return sum_range(tab, 1, 1.0, p);
}

ExpSumValue eval_g(double alpha_theta, long long P, double theta) {
  PowTable tab(0, P, theta, 2);
  return sum_range(tab, 0, 1.0, {0.0, alpha_theta});
}

ExpSumValue eval_h(double alpha_d, long long P, int d) {
  PowTable tab(0, P, 2.5, d);
  return sum_range(tab, 1, 0.0, {alpha_d, 0.0});
}

long long box_lo(double eta, double P) {
  return static_cast<long long>(std::floor(0.5 * eta * P));
}

long long box_hi(double eta, double P) {
  return static_cast<long long>(std::floor(2.0 * eta * P));
}

namespace {

struct Twist {
  long long cd = 0;
  double ct = 0.0;
  double eta = 0.0;
};

Twist twist_for(SumKind kind, int index, const model::SystemSpec& spec,
                const std::vector<double>* eta) {
  Twist t;
  std::size_t i = static_cast<std::size_t>(index);
  switch (kind) {
    case SumKind::F:
      if (i >= spec.lambda.size()) throw model::InvalidSpec("f index out of range");
      t.cd = spec.a_coeffs[i];
      t.ct = spec.lambda[i];
      if (eta) t.eta = (*eta)[i];
      break;
    case SumKind::G:
      if (i >= spec.mu.size()) throw model::InvalidSpec("g index out of range");
      t.cd = 0;
      t.ct = spec.mu[i];
      if (eta) t.eta = (*eta)[spec.lambda.size() + i];
      break;
    case SumKind::H:
      if (i >= spec.b_coeffs.size()) throw model::InvalidSpec("h index out of range");
      t.cd = spec.b_coeffs[i];
      t.ct = 0.0;
      if (eta) t.eta = (*eta)[spec.lambda.size() + spec.mu.size() + i];
      break;
  }
  return t;
}

}  // namespace

ExpSumValue eval_box_sum(SumKind kind, int index, const model::SystemSpec& spec,
                         const std::vector<double>& eta, PhasePoint p, double P) {
  Twist t = twist_for(kind, index, spec, &eta);
  PowTable tab(box_lo(t.eta, P), box_hi(t.eta, P), spec.theta, spec.d);
  return sum_range(tab, t.cd, t.ct, p);
}

ExpSumValue eval_full_sum(SumKind kind, int index, const model::SystemSpec& spec,
                          PhasePoint p, double X) {
  Twist t = twist_for(kind, index, spec, nullptr);
  PowTable tab(0, static_cast<long long>(std::floor(X)), spec.theta, spec.d);
  return sum_range(tab, t.cd, t.ct, p);
}

std::complex<double> complete_sum(long long q, long long a, int d) {
  long long am = ((a % q) + q) % q;
  std::vector<double> cycles(static_cast<std::size_t>(q));
  for (long long z = 1; z <= q; ++z)
    cycles[static_cast<std::size_t>(z - 1)] =
        static_cast<double>(mulmod(am, powmod(z, d, q), q)) / static_cast<double>(q);
  return simd::phase_sum(cycles.data(), nullptr, cycles.size());
}

std::complex<double> complete_sum_shuffled(long long q, long long a, int d,
                                           std::uint64_t seed) {
  long long am = ((a % q) + q) % q;
  std::vector<long long> order(static_cast<std::size_t>(q));
  std::iota(order.begin(), order.end(), 1);
  rng::Stream st(seed, 0x5351);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[st.next_u64() % i]);
  std::complex<double> acc{0.0, 0.0};
  for (long long z : order) {
    double c = 2.0 * static_cast<double>(mulmod(am, powmod(z, d, q), q)) /
               static_cast<double>(q);
    double s, co;
    simd::scalar_backend().sincospi(&c, &s, &co, 1);
    acc += std::complex<double>(co, s);
  }
  return acc;
}

WeylScanRow weyl_scan_q(long long q, int d) {
  std::size_t n = static_cast<std::size_t>(q);
  std::vector<double> hist(n, 0.0);
  for (long long z = 1; z <= q; ++z) hist[static_cast<std::size_t>(powmod(z, d, q))] += 1.0;

  // acc_r = hist[r] * e(a r / q), advanced by one rotation per step in a.
  std::vector<double> acc_re = hist, acc_im(n, 0.0);
  if (q == 1) return {1, 1.0, 1};
  std::vector<double> rot_re(n), rot_im(n);
  for (std::size_t r = 0; r < n; ++r) {
    double c = 2.0 * static_cast<double>(r) / static_cast<double>(q);
    double s, co;
    simd::scalar_backend().sincospi(&c, &s, &co, 1);
    rot_re[r] = co;
    rot_im[r] = s;
  }
  const auto& be = simd::backend();
  double bound = std::pow(static_cast<double>(q), 1.0 - 1.0 / static_cast<double>(d));
  WeylScanRow row{q, 0.0, 0};
  for (long long a = 1; a < q; ++a) {
    double re, im;
    be.rotate_accumulate(acc_re.data(), acc_im.data(), rot_re.data(), rot_im.data(), n,
                         &re, &im);
    if (std::gcd(a, q) == 1) {
      double ratio = std::hypot(re, im) / bound;
      if (ratio > row.max_ratio) {
        row.max_ratio = ratio;
        row.argmax_a = a;
      }
    }
  }
  return row;
}

std::complex<double> t_factor(long long q, long long a, const model::SystemSpec& spec) {
  std::complex<double> prod{1.0, 0.0};
  for (long long ai : spec.a_coeffs) prod *= complete_sum(q, a * ai, spec.d);
  for (long long bk : spec.b_coeffs) prod *= complete_sum(q, a * bk, spec.d);
  double scale = std::pow(static_cast<double>(q),
                          -static_cast<double>(spec.ell() + spec.n()));
  return prod * scale;
}

}  // namespace mixsys::expsum
