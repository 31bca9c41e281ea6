#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixsys/counting.hpp"
#include "mixsys/errors.hpp"
#include "mixsys/integral.hpp"
#include "mixsys/model.hpp"
#include "mixsys/series.hpp"

namespace mixsys::validate {

// Leading constant and exponent of the expected count
//   n_pred(P) = 2 tau * j0 * series * P^{s - theta - d}.
struct Prediction {
  double j0 = 0.0;
  double series_sum = 0.0;
  double series_tail = 0.0;
  bool series_tail_divergent = false;
  long long series_q = 0;
  double constant = 0.0;
  double exponent = 0.0;
  std::vector<std::string> warnings;

  double at(double P) const;
};

Prediction predict(const model::SystemSpec& spec, const std::vector<double>& eta,
                   long long series_q, const integral::QuadratureConfig& qcfg,
                   int threads = 1);

struct Row {
  long long P = 0;
  long long n_exact = 0;
  double n_pred = 0.0;
  double ratio = 0.0;
  double elapsed_ms = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  int points = 0;
};

// Least squares y = intercept + slope x.
LineFit fit_line(const std::vector<std::pair<double, double>>& xy);

struct ScalingReport {
  std::vector<Row> rows;
  LineFit exact_fit;  // log n_exact against log P, zero rows excluded
  double expected_exponent = 0.0;
  bool prediction_available = false;
  Prediction pred;
  std::vector<std::string> labels;
};

// Exact counts against the predicted power law over the given P grid. In
// strict mode hypothesis failures throw; otherwise they become labels.
ScalingReport validate_scaling(const model::SystemSpec& spec,
                               const std::vector<double>& eta,
                               const std::vector<long long>& ps, long long series_q,
                               const integral::QuadratureConfig& qcfg,
                               counting::Method method, int threads = 1);

struct SupScan {
  long long P = 0;
  double ratio_inequality_region = 0.0;  // sup |f_i| / P^{1 - eta1}
  double ratio_rational_region = 0.0;    // sup |f_i| / P^{1 - xi/2^{max(d-3,1-ish)}}
  long long samples = 0;
};

// Label-verified quasi-random sup scan of the twisted box sums over the two
// minor regions.
SupScan minor_arc_sup_scan(const model::SystemSpec& spec, const std::vector<double>& eta,
                           long long P, long long samples, std::uint64_t seed);

struct AuditCheck {
  std::string name;
  std::vector<double> ratios;  // one per grid point (doubling size)
  double bound = 0.0;          // exact checks: every ratio must stay below
  bool exact = false;          // false: stability, max <= 3 * min
  bool pass = false;
};

// Numerical audits of the bound inequalities the minor-arc analysis rests on.
std::vector<AuditCheck> inequality_audit(const model::SystemSpec& spec,
                                         const std::vector<double>& eta,
                                         std::uint64_t seed);

}  // namespace mixsys::validate
