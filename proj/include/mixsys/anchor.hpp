#pragma once
// Non-singular real zero of both forms with components in (0, 1/2), plus
// p-adic solubility certificates for the equation.
#include <array>
#include <cstdint>
#include <vector>

#include "mixsys/errors.hpp"
#include "mixsys/model.hpp"

namespace mixsys::anchor {

struct NoAnchorFound : FeasibilityError {
  using FeasibilityError::FeasibilityError;
};

struct SearchSpaceTooLarge : BudgetError {
  using BudgetError::BudgetError;
};

struct AnchorSolution {
  std::vector<double> eta;  // x block, y block, z block
  double residual_f = 0.0;
  double residual_d = 0.0;
  std::vector<std::array<double, 2>> jacobian_cols;  // per column (dF, dD)
  bool rank2 = false;
  double best_minor_cond = 0.0;
};

// Evaluations of the two forms at a positive real point.
double form_f(const model::SystemSpec& spec, const std::vector<double>& v);
double form_d(const model::SystemSpec& spec, const std::vector<double>& v);

AnchorSolution find_anchor(const model::SystemSpec& spec, std::uint64_t seed);

struct RankReport {
  int rank = 0;
  double best_minor_cond = 0.0;
  double best_minor_det = 0.0;   // relative to the row-norm product
};

RankReport rank_and_condition(const model::SystemSpec& spec,
                              const std::vector<double>& eta);

struct PadicVerdict {
  long long prime = 0;
  long long lifted_to = 0;            // modulus p^nu the witness satisfies
  std::vector<long long> witness;      // x block then z block
  bool nonsingular = false;
};

// Verifies a nonsingular zero of the equation mod p^{2 ord_p(d) + 1} (then
// Hensel-lifts it a few steps as evidence) for every prime up to
// max(prime_bound, primes dividing d and the coefficients).
std::vector<PadicVerdict> check_padic(const model::SystemSpec& spec, long long prime_bound);

}  // namespace mixsys::anchor
