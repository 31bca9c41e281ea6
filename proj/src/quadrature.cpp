#include "mixsys/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "mixsys/dd.hpp"
#include "mixsys/rng.hpp"

namespace mixsys::quad {

namespace {

GaussRule build_gauss(int n) {
  // Newton iteration on P_n from the Chebyshev-angle initial guess.
  GaussRule g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    g.x[n - 1 - i] = x;
    g.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return g;
}

}  // namespace

const GaussRule& gauss(int order) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_gauss(order)).first;
  return it->second;
}

namespace {

struct AdaptCtx {
  const std::function<std::complex<double>(double)>& f;
  const GaussRule& lo;
  const GaussRule& hi;
  double rel_tol;
  double err_acc = 0.0;
  long evals = 0;
  bool converged = true;
};

std::complex<double> adapt_rec(AdaptCtx& c, double a, double b, double tol, int depth) {
  std::complex<double> v1 = gauss_panel(c.f, a, b, c.lo);
  std::complex<double> v2 = gauss_panel(c.f, a, b, c.hi);
  c.evals += static_cast<long>(c.lo.x.size() + c.hi.x.size());
  double err = std::abs(v2 - v1);
  if (err <= tol || err <= c.rel_tol * std::abs(v2)) {
    c.err_acc += err;
    return v2;
  }
  if (depth <= 0) {
    c.converged = false;
    c.err_acc += err;
    return v2;
  }
  double m = 0.5 * (a + b);
  return adapt_rec(c, a, m, 0.5 * tol, depth - 1) + adapt_rec(c, m, b, 0.5 * tol, depth - 1);
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                  double a, double b, double abs_tol, double rel_tol,
                                  int order, int max_depth) {
  AdaptCtx c{f, gauss(order), gauss(2 * order), rel_tol};
  AdaptiveResult r;
  r.value = adapt_rec(c, a, b, abs_tol, max_depth);
  r.err_est = c.err_acc;
  r.evals = c.evals;
  r.converged = c.converged;
  return r;
}

double si(double x) {
  double ax = std::abs(x);
  double sign = x < 0 ? -1.0 : 1.0;
  if (ax < 1e-8) return x;
  if (ax < 40.0) {
    // Alternating series with heavy cancellation, so run it in double-double.
    using namespace mixsys::dd;
    DD x2 = mul(DD{ax}, DD{ax});
    DD u{ax};  // x^(2k+1)/(2k+1)!
    DD sum = u;
    for (int k = 0; k < 120; ++k) {
      u = div(mul(u, x2), static_cast<double>((2 * k + 2) * (2 * k + 3)));
      DD term = div(u, static_cast<double>(2 * k + 3));
      sum = (k % 2 == 0) ? sub(sum, term) : add(sum, term);
      if (std::abs(term.hi) < 1e-34 * std::abs(sum.hi)) break;
    }
    return sign * sum.to_double();
  }
  // Si(x) = pi/2 - f cos x - g sin x with the asymptotic f, g series summed
  // to their smallest terms (error ~ e^{-x}, negligible for x >= 40).
  double inv = 1.0 / ax;
  double f = 0.0, g = 0.0, tf = inv, tg = inv * inv;
  for (int k = 0; k < 40; ++k) {
    double nf = (k % 2 == 0) ? tf : -tf;
    double ng = (k % 2 == 0) ? tg : -tg;
    f += nf;
    g += ng;
    double next_tf = tf * (2 * k + 1) * (2 * k + 2) * inv * inv;
    double next_tg = tg * (2 * k + 2) * (2 * k + 3) * inv * inv;
    if (next_tf > tf) break;
    tf = next_tf;
    tg = next_tg;
  }
  return sign * (M_PI_2 - f * std::cos(ax) - g * std::sin(ax));
}

double cos_tail_over_t2(double mu, double A) {
  // int_A^inf cos(2 pi mu t)/t^2 dt = cos(2 pi mu A)/A - 2 pi |mu| (pi/2 - Si(2 pi |mu| A))
  if (A <= 0) throw std::domain_error("cos_tail_over_t2: A must be positive");
  double b = 2.0 * M_PI * std::abs(mu);
  if (b == 0.0) return 1.0 / A;
  return std::cos(b * A) / A - b * (M_PI_2 - si(b * A));
}

namespace {
const double kSqrtPrimes[] = {
    1.4142135623730951, 1.7320508075688772, 2.23606797749979,   2.6457513110645907,
    3.3166247903554,    3.605551275463989,  4.123105625617661,  4.358898943540674,
    4.795831523312719,  5.385164807134504,  5.5677643628300215, 6.082762530298219,
    6.4031242374328485, 6.557438524302,     6.855654600401044,  7.280109889280518,
    7.681145747868608,  7.810249675906654,  8.18535277187245,   8.426149773176359,
    8.54400374531753,   8.888194417315589,  9.1104335791443,    9.433981132056603};
}

std::vector<double> kronecker_point(std::uint64_t k, int dim, std::uint64_t seed,
                                    std::uint64_t shift_index) {
  if (dim > 24) throw std::domain_error("kronecker_point: dimension > 24");
  std::vector<double> p(dim);
  for (int j = 0; j < dim; ++j) {
    double shift = rng::uniform(seed, 7700 + shift_index, j);
    using namespace mixsys::dd;
    DD v = add(mul(DD{kSqrtPrimes[j]}, static_cast<double>(k)), shift);
    p[j] = fract(v).to_double();
  }
  return p;
}

}  // namespace mixsys::quad
