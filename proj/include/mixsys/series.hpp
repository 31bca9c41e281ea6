#pragma once

#include <vector>

#include "mixsys/errors.hpp"
#include "mixsys/model.hpp"

namespace mixsys::series {

struct SearchSpaceTooLarge : BudgetError {
  using BudgetError::BudgetError;
};

// The tail bound needs sum_{q>Q} q^{1-(ell+n)/d} to converge; when ell+n <= 2d
// it does not and the result is flagged rather than thrown, so callers can
// still inspect the partial sum.
struct SeriesResult {
  long long Q = 0;
  double partial_sum = 0.0;
  double tail_bound = 0.0;
  double empirical_constant = 0.0;
  bool divergent_tail = false;
  std::vector<std::pair<long long, double>> per_q_terms;
};

// sum over q<=Q, (a,q)=1 of q^{-(ell+n)} prod_i S(q, a a_i) prod_k S(q, a b_k).
SeriesResult singular_series(const model::SystemSpec& spec, long long Q,
                             int threads = 1);

// Density of solutions of sum a_i x_i^d + sum b_k z_k^d == 0 mod p^k,
// normalized by p^{k(ell+n-1)}; k = 0 gives 1.
double euler_factor(const model::SystemSpec& spec, long long p, int k);

// Largest k with p^k(ell+n-1) enumeration under budget, then the stabilized
// density. Throws SearchSpaceTooLarge if even k = 1 does not fit.
struct EulerFactorResult {
  long long p = 0;
  int k_used = 0;
  double density = 0.0;
  double change_at_last_doubling = 0.0;
};
EulerFactorResult euler_factor_stabilized(const model::SystemSpec& spec, long long p,
                                          int k_max = 6);

// prod over p <= p_bound of the stabilized factor.
double euler_product(const model::SystemSpec& spec, long long p_bound,
                     int threads = 1);

// max over q <= q_bound, (a,q)=1 of |S(q,a)| / q^{1-1/d}.
double empirical_gauss_constant(int d, long long q_bound, int threads = 1);

}  // namespace mixsys::series
