#pragma once
// Exponential sums: the unit sums f, g, h; the coefficient-twisted box sums
// f_i, g_j, h_k and their full-range versions; the complete rational sums
// S(q,a) and the product factor T(q,a).
#include <complex>
#include <cstdint>
#include <vector>

#include "mixsys/dd.hpp"
#include "mixsys/errors.hpp"
#include "mixsys/model.hpp"

namespace mixsys::expsum {

struct PrecisionExceeded : CertificationError {
  using CertificationError::CertificationError;
};

struct PhasePoint {
  double alpha_d = 0.0;
  double alpha_theta = 0.0;
};

struct ExpSumValue {
  std::complex<double> value{0.0, 0.0};
  long long terms = 0;
  double max_phase_error = 0.0;  // certified bound per term, in cycles
};

// Cached powers x^theta (double-double) and x^d (exact integers) for
// lo < x <= hi. Grid scans vary alpha, not x, so the table is built once.
struct PowTable {
  PowTable(long long lo, long long hi, double theta, int d);
  long long lo = 0;
  long long hi = 0;
  double theta = 0.0;
  int d = 0;
  std::vector<dd::DD> pow_theta;   // [x - lo - 1] = x^theta
  std::vector<long long> pow_d;    // [x - lo - 1] = x^d
};

// sum over lo < x <= hi of e(coeff_d * alpha_d * x^d + coeff_theta * alpha_theta * x^theta),
// phases assembled in double-double and reduced to [0,1) before rounding.
ExpSumValue sum_range(const PowTable& tab, long long coeff_d, double coeff_theta,
                      PhasePoint p);

ExpSumValue eval_f(PhasePoint p, long long P, double theta, int d);
ExpSumValue eval_g(double alpha_theta, long long P, double theta);
ExpSumValue eval_h(double alpha_d, long long P, int d);

enum class SumKind { F, G, H };

// Integer endpoints of the anchored box (eta/2 * P, 2 eta * P].
long long box_lo(double eta, double P);
long long box_hi(double eta, double P);

// Box sum for the index-th coordinate of the given block; eta is the full
// s-vector (x block, then y block, then z block); index is 0-based.
ExpSumValue eval_box_sum(SumKind kind, int index, const model::SystemSpec& spec,
                         const std::vector<double>& eta, PhasePoint p, double P);

// Full-range sum over 1 <= x <= X with the same coefficient twist, for the
// splitting identity box_sum = full(2 eta P) - full(eta P / 2).
ExpSumValue eval_full_sum(SumKind kind, int index, const model::SystemSpec& spec,
                          PhasePoint p, double X);

// S(q, a) = sum_{z=1}^{q} e(a z^d / q), exact integer phases.
std::complex<double> complete_sum(long long q, long long a, int d);

// Reference implementation summing the same exact phases in a seed-shuffled
// order; used to validate order-independence.
std::complex<double> complete_sum_shuffled(long long q, long long a, int d,
                                           std::uint64_t seed);

// max over gcd(a,q)=1 of |S(q,a)| / q^{1-1/d}, all residues a in one pass
// (histogram of z^d mod q, then a rotating DFT).
struct WeylScanRow {
  long long q = 0;
  double max_ratio = 0.0;
  long long argmax_a = 0;
};
WeylScanRow weyl_scan_q(long long q, int d);

// T(q, a) = q^{-(ell+n)} prod_i S(q, a a_i) prod_k S(q, a b_k).
std::complex<double> t_factor(long long q, long long a, const model::SystemSpec& spec);

}  // namespace mixsys::expsum
