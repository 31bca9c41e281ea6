#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "mixsys/errors.hpp"
#include "mixsys/kernels.hpp"
#include "mixsys/model.hpp"

namespace mixsys::integral {

using kernels::QuadratureDivergence;

// The two-dimensional density integral only converges absolutely when the
// system's decay exponent is positive; gated before any quadrature runs.
struct NotAbsolutelyConvergent : FeasibilityError {
  using FeasibilityError::FeasibilityError;
};

// Spectral and physical evaluations of the same tent-smoothed integral
// disagree beyond their combined error estimates.
struct RouteMismatch : CertificationError {
  using CertificationError::CertificationError;
};

struct QuadratureConfig {
  double rel_tol = 1e-4;
  double abs_tol = 1e-9;
  double max_phase_per_panel = 8.0;  // radians per Gauss panel in gamma
  double truncation_radius = 0.0;    // 0 grows the grid from the fitted decay
  long long mc_samples = 1 << 20;
  std::uint64_t seed = 1;
};

// Oscillatory integral over (lo, hi] of e(c_d g^d + c_t g^theta), panels sized
// by the phase slope, certified by panel doubling.
std::complex<double> v_function(double lo, double hi, double c_d, int d, double c_t,
                                double theta, const QuadratureConfig& cfg);

// Product of the factor transforms at one frequency point, boxes at scale P.
std::complex<double> k_kernel(const model::SystemSpec& spec,
                              const std::vector<double>& eta, double beta_d,
                              double alpha_theta, double P,
                              const QuadratureConfig& cfg);

struct JZeroResult {
  double value = 0.0;
  double tail_estimate = 0.0;
  double refine_change = 0.0;
  double decay_fitted = 0.0;
  double radius_d = 0.0;
  double radius_t = 0.0;
  long long grid_nodes = 0;
};

JZeroResult j_zero(const model::SystemSpec& spec, const std::vector<double>& eta,
                   double P, const QuadratureConfig& cfg, int threads = 1);

// One shared frequency grid evaluates the full integral and every
// tent-smoothed value, so differences j(T) - j0 carry no cross-grid noise.
struct TentSeries {
  JZeroResult base;
  std::vector<std::pair<double, double>> j_of_t;  // (T, spectral value)
};

TentSeries tent_series(const model::SystemSpec& spec, const std::vector<double>& eta,
                       double P, const std::vector<double>& ts,
                       const QuadratureConfig& cfg, int threads = 1);

struct PhysicalResult {
  double value = 0.0;
  double err = 0.0;
  long long samples = 0;
};

// Quasi-random volume integral of psi_T(F) psi_T(D) over the boxes.
PhysicalResult j_t_physical(const model::SystemSpec& spec,
                            const std::vector<double>& eta, double P, double T,
                            const QuadratureConfig& cfg, int threads = 1);

struct JTResult {
  double T = 0.0;
  double spectral = 0.0;
  double spectral_tail = 0.0;
  double physical = 0.0;
  double physical_err = 0.0;
};

// Both routes at one T; throws RouteMismatch when they disagree beyond the
// combined error estimates.
JTResult j_t(const model::SystemSpec& spec, const std::vector<double>& eta, double P,
             double T, const QuadratureConfig& cfg, int threads = 1);

}  // namespace mixsys::integral
