#include "mixsys/kernels.hpp"

#include <cmath>
#include <sstream>

#include "mixsys/quadrature.hpp"
#include "mixsys/simd.hpp"

namespace mixsys::kernels {
namespace {

constexpr double kPi = 3.14159265358979323846;

// sin(x)/x with a series takeover below 1e-4 (quartic term ~ 1e-17).
double sinc1(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

}  // namespace

KernelConfig make_config(double tau, double P) {
  if (!(tau > 0.0)) throw FeasibilityError("kernel config requires tau > 0");
  double lp = std::log(P);
  if (!(lp > 1.0)) throw FeasibilityError("kernel config requires log P > 1");
  return {tau, lp, tau / lp};
}

double kernel_pm(double alpha, const KernelConfig& cfg, Sign sign) {
  double tt = cfg.tau_tilde;
  double c2 = 2.0 * cfg.tau + (sign == Sign::Plus ? tt : -tt);
  return c2 * sinc1(kPi * alpha * tt) * sinc1(kPi * alpha * c2);
}

double transform_closed(double xi, const KernelConfig& cfg, Sign sign) {
  double tt = cfg.tau_tilde;
  double inner = sign == Sign::Plus ? cfg.tau : cfg.tau - tt;
  double outer = sign == Sign::Plus ? cfg.tau + tt : cfg.tau;
  double ax = std::abs(xi);
  if (ax <= inner) return 1.0;
  if (ax >= outer) return 0.0;
  return (outer - ax) / tt;
}

TransformQuad::TransformQuad(const KernelConfig& cfg, Sign sign, double xi_max,
                             int order) {
  double tt = cfg.tau_tilde;
  // Product-to-sum: K = [cos(2 pi c1 a) - cos(2 pi c2 a)] / (2 pi^2 a^2 tt).
  c1_ = sign == Sign::Plus ? cfg.tau : cfg.tau - tt;
  c2_ = sign == Sign::Plus ? cfg.tau + tt : cfg.tau;
  tail_coef_ = 1.0 / (2.0 * kPi * kPi * tt);
  cutoff_ = std::max(1e3, 10.0 / tt);
  // Panel width so the fastest integrand frequency stays well inside what a
  // Gauss rule of this order resolves.
  double f_max = c2_ + std::abs(xi_max) + 1.0;
  double width = 2.0 / f_max;
  long panels = static_cast<long>(std::ceil(cutoff_ / width));
  const auto& rule = quad::gauss(order);
  alpha_.reserve(static_cast<std::size_t>(panels) * rule.x.size());
  wk_.reserve(static_cast<std::size_t>(panels) * rule.x.size());
  for (long k = 0; k < panels; ++k) {
    double a = cutoff_ * static_cast<double>(k) / static_cast<double>(panels);
    double b = cutoff_ * static_cast<double>(k + 1) / static_cast<double>(panels);
    double h = 0.5 * (b - a);
    double m = 0.5 * (a + b);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      double node = m + h * rule.x[i];
      alpha_.push_back(node);
      wk_.push_back(2.0 * h * rule.w[i] * kernel_pm(node, cfg, sign));
    }
  }
}

double TransformQuad::eval(double xi) const {
  // 2 int_0^A cos(2 pi xi a) K(a) da, via Re sum w_i K(a_i) e(xi a_i).
  std::vector<double> cycles(alpha_.size());
  for (std::size_t i = 0; i < alpha_.size(); ++i) cycles[i] = xi * alpha_[i];
  double re, im;
  simd::backend().phase_sum(cycles.data(), wk_.data(), cycles.size(), &re, &im);
  double tail = tail_coef_ * (quad::cos_tail_over_t2(c1_ + xi, cutoff_) +
                              quad::cos_tail_over_t2(c1_ - xi, cutoff_) -
                              quad::cos_tail_over_t2(c2_ + xi, cutoff_) -
                              quad::cos_tail_over_t2(c2_ - xi, cutoff_));
  return re + tail;
}

double kernel_transform(double xi, const KernelConfig& cfg, Sign sign) {
  TransformQuad tq(cfg, sign, std::abs(xi));
  double by_quad = tq.eval(xi);
  double by_form = transform_closed(xi, cfg, sign);
  if (std::abs(by_quad - by_form) > 1e-6) {
    std::ostringstream msg;
    msg << "transform routes disagree at xi=" << xi << ": quadrature " << by_quad
        << " vs closed form " << by_form;
    throw QuadratureDivergence(msg.str());
  }
  return by_form;
}

double psi_tent(double y, double T) {
  double u = 1.0 - T * std::abs(y);
  return u > 0.0 ? T * u : 0.0;
}

double triangle(double x) {
  double u = 1.0 - std::abs(x);
  return u > 0.0 ? u : 0.0;
}

double triangle_via_sinc2(double x) {
  const double B = 40.0;
  auto f = [x](double xi) -> std::complex<double> {
    double s = sinc1(kPi * xi);
    return {2.0 * std::cos(2.0 * kPi * x * xi) * s * s, 0.0};
  };
  auto r = quad::integrate_adaptive(f, 0.0, B, 1e-9, 1e-12);
  // sinc^2 tail: (1 - cos(2 pi xi)) / (2 pi^2 xi^2) against cos(2 pi x xi).
  double tail = (1.0 / (kPi * kPi)) *
                (quad::cos_tail_over_t2(x, B) - 0.5 * quad::cos_tail_over_t2(x + 1.0, B) -
                 0.5 * quad::cos_tail_over_t2(x - 1.0, B));
  return r.value.real() + tail;
}

EnvelopeScan scan_envelope(const KernelConfig& cfg, Sign sign) {
  EnvelopeScan out;
  // log-spaced |alpha| from 1e-6 to 1e6, both signs
  const int kPoints = 4001;
  for (int i = 0; i < kPoints; ++i) {
    double t = -6.0 + 12.0 * static_cast<double>(i) / (kPoints - 1);
    double a = std::pow(10.0, t);
    for (double alpha : {a, -a}) {
      double env = std::min({1.0, 1.0 / std::abs(alpha),
                             cfg.log_p / (alpha * alpha)});
      double ratio = std::abs(kernel_pm(alpha, cfg, sign)) / env;
      ++out.points;
      if (ratio > out.max_ratio) {
        out.max_ratio = ratio;
        out.argmax_alpha = alpha;
      }
    }
  }
  return out;
}

}  // namespace mixsys::kernels
