#pragma once
// Sandwich kernels K+- whose Fourier transforms trap the indicator of
// (-tau, tau), the triangle kernel with its sinc^2 pair, and the tent family.
#include <vector>

#include "mixsys/errors.hpp"

namespace mixsys::kernels {

struct QuadratureDivergence : CertificationError {
  using CertificationError::CertificationError;
};

struct KernelConfig {
  double tau = 1.0;
  double log_p = 3.0;
  double tau_tilde = 1.0 / 3.0;  // tau / log P
};

// Requires log P > 1 so that tau_tilde < tau.
KernelConfig make_config(double tau, double P);

enum class Sign { Plus, Minus };

// K+-(alpha) = sin(pi alpha tt) sin(pi alpha (2 tau +- tt)) / (pi^2 alpha^2 tt),
// evaluated in the singularity-free product form (2 tau +- tt) sinc sinc.
double kernel_pm(double alpha, const KernelConfig& cfg, Sign sign);

// Closed-form transform: trapezoid of height 1. Minus: 1 on |xi| <= tau - tt,
// 0 at |xi| >= tau. Plus: 1 on |xi| <= tau, 0 at |xi| >= tau + tt.
double transform_closed(double xi, const KernelConfig& cfg, Sign sign);

// Quadrature route for int e(xi alpha) K(alpha) d alpha: fixed nodes on
// [0, cutoff] built once (weights carry K), plus the exact oscillatory tail
// expressed through the sine integral. Each eval costs one phase sum.
class TransformQuad {
 public:
  TransformQuad(const KernelConfig& cfg, Sign sign, double xi_max, int order = 24);
  double eval(double xi) const;
  double cutoff() const { return cutoff_; }
  std::size_t nodes() const { return alpha_.size(); }

 private:
  std::vector<double> alpha_;
  std::vector<double> wk_;  // quadrature weight times 2 K(alpha)
  double cutoff_ = 0.0;
  double c1_ = 0.0;  // tail frequencies from the product-to-sum split
  double c2_ = 0.0;
  double tail_coef_ = 0.0;  // 1 / (2 pi^2 tau_tilde)
};

// Both routes cross-checked; throws QuadratureDivergence beyond 1e-6.
double kernel_transform(double xi, const KernelConfig& cfg, Sign sign);

// psi_T(y) = T (1 - T |y|) on |y| <= 1/T, else 0.
double psi_tent(double y, double T);

// Triangle kernel max{0, 1 - |x|}.
double triangle(double x);

// Same value through the Fourier route int e(x xi) sinc^2(xi) d xi.
double triangle_via_sinc2(double x);

// max over a log-spaced grid of |K(alpha)| / min{1, 1/|alpha|, log P/alpha^2}.
struct EnvelopeScan {
  double max_ratio = 0.0;
  double argmax_alpha = 0.0;
  long points = 0;
};
EnvelopeScan scan_envelope(const KernelConfig& cfg, Sign sign);

}  // namespace mixsys::kernels
