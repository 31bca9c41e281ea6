#pragma once
// Error taxonomy shared across modules. The CLI maps these onto exit codes:
// feasibility 1, certification 2, budget 3.
#include <stdexcept>

namespace mixsys {

struct FeasibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mixsys
