#pragma once
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace mixsys::quad {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1,1]
  std::vector<double> w;
};

// Cached Gauss-Legendre rule of the given order.
const GaussRule& gauss(int order);

template <class F>
auto gauss_panel(F&& f, double a, double b, const GaussRule& g) {
  double h = 0.5 * (b - a);
  double m = 0.5 * (a + b);
  decltype(f(m)) acc{};
  for (std::size_t i = 0; i < g.x.size(); ++i) acc += g.w[i] * f(m + h * g.x[i]);
  return h * acc;
}

struct AdaptiveResult {
  std::complex<double> value{0.0, 0.0};
  double err_est = 0.0;
  long evals = 0;
  bool converged = true;
};

// Bisection-adaptive integration; the error estimate per panel is the
// difference between the base rule and the order-doubled rule.
AdaptiveResult integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                  double a, double b, double abs_tol, double rel_tol,
                                  int order = 12, int max_depth = 48);

// Sine integral Si(x) = int_0^x sin(t)/t dt. Double-double series below 40,
// asymptotic expansion above; absolute error well under 1e-14 everywhere.
double si(double x);

// int_A^inf cos(2 pi mu t) / t^2 dt, exact via Si.
double cos_tail_over_t2(double mu, double A);

// Kronecker low-discrepancy sequence: point k, dimension dim, shifted by a
// counter-based RNG stream keyed on (seed, shift_index). Coordinates are
// frac(k*sqrt(p_j) + shift_j) computed in double-double so k up to 2^40 is safe.
std::vector<double> kronecker_point(std::uint64_t k, int dim, std::uint64_t seed,
                                    std::uint64_t shift_index);

}  // namespace mixsys::quad
