#pragma once
// Exact integer counting: N(P), the block counts V_t, the auxiliary systems
// Z1/Z2, and the quadrature moment the sandwich bounds compare against. All
// inequality decisions are certified (double-double, escalating to 50-digit
// arithmetic on the boundary shell).
#include <cstdint>
#include <vector>

#include "mixsys/errors.hpp"
#include "mixsys/model.hpp"

namespace mixsys::counting {

struct UncertifiedBoundary : CertificationError {
  using CertificationError::CertificationError;
};

struct RangeOverflow : BudgetError {
  using BudgetError::BudgetError;
};

struct GridTooCoarse : CertificationError {
  using CertificationError::CertificationError;
};

enum class Method { Brute, Mitm };

// One enumerated coordinate: integer range (lo, hi], contributing
// f_coeff * x^theta to the inequality form and d_coeff * x^d to the equation.
struct Coord {
  long long lo = 0;
  long long hi = 0;
  double f_coeff = 0.0;
  long long d_coeff = 0;
};

struct GenericCount {
  long long count = 0;
  long long near_boundary = 0;  // undecided at 50 digits; 0 for certified
};

// #{tuples : sum d_coeff x^d == 0 exactly and |sum f_coeff x^theta| < thresh}.
GenericCount count_generic(const std::vector<Coord>& coords, double theta, int d,
                           double thresh, Method method, int threads = 1);

struct CountResult {
  long long P = 0;
  long long count = 0;
  Method method = Method::Mitm;
  long long elapsed_ms = 0;
  long long near_boundary = 0;
};

CountResult count_solutions(const model::SystemSpec& spec, const std::vector<double>& eta,
                            long long P, Method method, int threads = 1);

// V_t(I; delta): 2t-tuples in I = (lo, hi] with |sigma_{t,theta}| < delta.
long long count_vt(long long lo, long long hi, double delta, double theta, int t,
                   Method method = Method::Mitm);

enum class ZKind { Z1, Z2 };

struct ZConfig {
  int t1 = 1;  // pairs in the first sigma block; the asymptotic analysis uses
  int t2 = 1;  // A_d/2 and A_theta/2, desk scale keeps the blocks small
  int index_i = 0;
  int index_jk = 0;  // j for Z1, k for Z2
};

long long count_z(ZKind kind, const model::SystemSpec& spec,
                  const std::vector<double>& eta, double P, double kappa,
                  const ZConfig& cfg, Method method = Method::Mitm);

struct MomentResult {
  double value = 0.0;       // finer-grid value
  double refine_change = 0.0;  // |coarse - fine| / fine
  long long grid_points = 0;
};

// int_{-kappa}^{kappa} int_0^1 |f(alpha_d, alpha_theta)|^{2t} d alpha by
// composite quadrature with steps 0.1 P^{-d} and 0.1 P^{-theta}, refined once
// (Richardson pair); throws GridTooCoarse when refinement moves it over 5%.
MomentResult moment_estimate(int t, long long P, double kappa, double theta, int d,
                             int threads = 1);

}  // namespace mixsys::counting
