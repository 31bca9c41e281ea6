#include "mixsys/integral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "mixsys/parallel.hpp"
#include "mixsys/quadrature.hpp"
#include "mixsys/simd.hpp"

namespace mixsys::integral {
namespace {

constexpr double kPi = 3.14159265358979323846264338328;

struct Factor {
  double lo, hi;
  double c_d;  // multiplies g^d, paired with beta_d
  double c_t;  // multiplies g^theta, paired with alpha_theta
};

std::vector<Factor> factors_of(const model::SystemSpec& spec,
                               const std::vector<double>& eta, double P) {
  std::size_t ell = spec.lambda.size(), m = spec.mu.size(), n = spec.b_coeffs.size();
  if (eta.size() != ell + m + n)
    throw model::InvalidSpec("eta length does not match the number of variables");
  std::vector<Factor> fs;
  fs.reserve(eta.size());
  for (std::size_t i = 0; i < ell; ++i)
    fs.push_back({eta[i] * P / 2.0, 2.0 * eta[i] * P,
                  static_cast<double>(spec.a_coeffs[i]), spec.lambda[i]});
  for (std::size_t j = 0; j < m; ++j)
    fs.push_back({eta[ell + j] * P / 2.0, 2.0 * eta[ell + j] * P, 0.0, spec.mu[j]});
  for (std::size_t k = 0; k < n; ++k)
    fs.push_back({eta[ell + m + k] * P / 2.0, 2.0 * eta[ell + m + k] * P,
                  static_cast<double>(spec.b_coeffs[k]), 0.0});
  return fs;
}

// Gauss nodes over the box, with the frequency each node contributes in the
// beta_d direction (u = c_d g^d) and the alpha_theta direction (t = c_t g^theta).
struct NodeSet {
  std::vector<double> u, t, w;
};

NodeSet factor_nodes(const Factor& f, int d, double theta, double fd_max, double ft_max,
                     double max_phase_rad, int mult) {
  double len = f.hi - f.lo;
  double slope_cycles =
      (std::abs(f.c_d) * fd_max * d * std::pow(f.hi, d - 1) +
       std::abs(f.c_t) * ft_max * theta * std::pow(f.hi, theta - 1.0));
  double per_panel = max_phase_rad / (2.0 * kPi);
  long long panels =
      (static_cast<long long>(std::ceil(len * slope_cycles / per_panel)) + 4) * mult;
  if (panels > 2000000)
    throw BudgetError("oscillatory panel count exceeds the budget");
  const auto& rule = quad::gauss(24);
  NodeSet ns;
  std::size_t count = static_cast<std::size_t>(panels) * rule.x.size();
  ns.u.reserve(count);
  ns.t.reserve(count);
  ns.w.reserve(count);
  for (long long p = 0; p < panels; ++p) {
    double a = f.lo + len * static_cast<double>(p) / static_cast<double>(panels);
    double b = f.lo + len * static_cast<double>(p + 1) / static_cast<double>(panels);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
      double g = mid + half * rule.x[k];
      ns.u.push_back(f.c_d == 0.0 ? 0.0 : f.c_d * std::pow(g, d));
      ns.t.push_back(f.c_t == 0.0 ? 0.0 : f.c_t * std::pow(g, theta));
      ns.w.push_back(half * rule.w[k]);
    }
  }
  return ns;
}

std::complex<double> eval_nodes(const NodeSet& ns, double beta, double alpha) {
  std::vector<double> cycles(ns.u.size());
  for (std::size_t i = 0; i < cycles.size(); ++i)
    cycles[i] = ns.u[i] * beta + ns.t[i] * alpha;
  return simd::phase_sum(cycles.data(), ns.w.data(), cycles.size());
}

void certify_nodes(const Factor& f, const NodeSet& ns, int d, double theta, double fd_max,
                   double ft_max, const QuadratureConfig& cfg) {
  NodeSet fine = factor_nodes(f, d, theta, fd_max, ft_max, cfg.max_phase_per_panel, 2);
  for (double sgn : {1.0, -1.0}) {
    std::complex<double> v1 = eval_nodes(ns, fd_max, sgn * ft_max);
    std::complex<double> v2 = eval_nodes(fine, fd_max, sgn * ft_max);
    if (std::abs(v1 - v2) > std::max(cfg.abs_tol, 1e-8 * (f.hi - f.lo)))
      throw QuadratureDivergence("panel doubling moved a factor transform at the corner");
  }
}

struct Grid {
  long long n_d = 0, n_t = 0;
  double h_d = 0.0, h_t = 0.0;
  std::vector<double> re, im;
  std::size_t rows() const { return static_cast<std::size_t>(2 * n_d + 1); }
  std::size_t cols() const { return static_cast<std::size_t>(2 * n_t + 1); }

  double value() const {
    double s = 0.0;
    for (double v : re) s += v;
    return s * h_d * h_t;
  }

  double value_tent(double T) const {
    auto hat = [&](double u) {
      double z = kPi * u / T;
      if (std::abs(z) < 1e-6) return 1.0 - z * z / 3.0;
      double s = std::sin(z) / z;
      return s * s;
    };
    std::vector<double> wt(cols());
    for (std::size_t j = 0; j < cols(); ++j)
      wt[j] = hat((static_cast<double>(j) - static_cast<double>(n_t)) * h_t);
    double s = 0.0;
    for (std::size_t i = 0; i < rows(); ++i) {
      double wd = hat((static_cast<double>(i) - static_cast<double>(n_d)) * h_d);
      const double* row = re.data() + i * cols();
      double rs = 0.0;
      for (std::size_t j = 0; j < cols(); ++j) rs += wt[j] * row[j];
      s += wd * rs;
    }
    return s * h_d * h_t;
  }

  // Dyadic shell masses of |K|, radius normalized as max(|i|/n_d, |j|/n_t).
  void shells(double* inner, double* outer) const {
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < rows(); ++i) {
      double rd = std::abs(static_cast<double>(i) - static_cast<double>(n_d)) /
                  static_cast<double>(n_d);
      for (std::size_t j = 0; j < cols(); ++j) {
        double rt = std::abs(static_cast<double>(j) - static_cast<double>(n_t)) /
                    static_cast<double>(n_t);
        double r = std::max(rd, rt);
        if (r <= 0.25 || r > 1.0) continue;
        std::size_t at = i * cols() + j;
        double mag = std::sqrt(re[at] * re[at] + im[at] * im[at]);
        if (r > 0.5)
          s1 += mag;
        else
          s2 += mag;
      }
    }
    *outer = s1 * h_d * h_t;
    *inner = s2 * h_d * h_t;
  }
};

Grid build_grid(const std::vector<Factor>& fs, int d, double theta, long long n_d,
                long long n_t, double h_d, double h_t, const QuadratureConfig& cfg) {
  Grid g;
  g.n_d = n_d;
  g.n_t = n_t;
  g.h_d = h_d;
  g.h_t = h_t;
  std::size_t total = g.rows() * g.cols();
  g.re.assign(total, 1.0);
  g.im.assign(total, 0.0);
  double fd_max = static_cast<double>(n_d) * h_d;
  double ft_max = static_cast<double>(n_t) * h_t;

  std::vector<double> tmp_re, tmp_im;
  std::vector<double> col_c(g.rows()), col_s(g.rows()), row_c(g.cols()), row_s(g.cols());
  std::vector<double> cyc(std::max(g.rows(), g.cols()));
  const auto& be = simd::backend();

  for (const Factor& f : fs) {
    NodeSet ns = factor_nodes(f, d, theta, fd_max, ft_max, cfg.max_phase_per_panel, 1);
    certify_nodes(f, ns, d, theta, fd_max, ft_max, cfg);
    bool has_d = f.c_d != 0.0, has_t = f.c_t != 0.0;
    if (has_d && has_t) {
      tmp_re.assign(total, 0.0);
      tmp_im.assign(total, 0.0);
      for (std::size_t q = 0; q < ns.u.size(); ++q) {
        double base_d = 2.0 * ns.u[q] * h_d;
        for (std::size_t i = 0; i < g.rows(); ++i)
          cyc[i] = base_d * (static_cast<double>(i) - static_cast<double>(n_d));
        be.sincospi(cyc.data(), col_s.data(), col_c.data(), g.rows());
        double base_t = 2.0 * ns.t[q] * h_t;
        for (std::size_t j = 0; j < g.cols(); ++j)
          cyc[j] = base_t * (static_cast<double>(j) - static_cast<double>(n_t));
        be.sincospi(cyc.data(), row_s.data(), row_c.data(), g.cols());
        double w = ns.w[q];
        for (std::size_t i = 0; i < g.rows(); ++i) {
          double ar = w * col_c[i], ai = w * col_s[i];
          double* out_r = tmp_re.data() + i * g.cols();
          double* out_i = tmp_im.data() + i * g.cols();
          for (std::size_t j = 0; j < g.cols(); ++j) {
            out_r[j] += ar * row_c[j] - ai * row_s[j];
            out_i[j] += ar * row_s[j] + ai * row_c[j];
          }
        }
      }
      for (std::size_t at = 0; at < total; ++at) {
        double pr = g.re[at] * tmp_re[at] - g.im[at] * tmp_im[at];
        double pi = g.re[at] * tmp_im[at] + g.im[at] * tmp_re[at];
        g.re[at] = pr;
        g.im[at] = pi;
      }
    } else if (has_d) {
      // Transform depends on beta_d only: one complex value per row.
      for (std::size_t i = 0; i < g.rows(); ++i) {
        double beta = (static_cast<double>(i) - static_cast<double>(n_d)) * h_d;
        std::complex<double> v = eval_nodes(ns, beta, 0.0);
        double* out_r = g.re.data() + i * g.cols();
        double* out_i = g.im.data() + i * g.cols();
        for (std::size_t j = 0; j < g.cols(); ++j) {
          double pr = out_r[j] * v.real() - out_i[j] * v.imag();
          double pi = out_r[j] * v.imag() + out_i[j] * v.real();
          out_r[j] = pr;
          out_i[j] = pi;
        }
      }
    } else {
      std::vector<std::complex<double>> vrow(g.cols());
      for (std::size_t j = 0; j < g.cols(); ++j) {
        double alpha = (static_cast<double>(j) - static_cast<double>(n_t)) * h_t;
        vrow[j] = eval_nodes(ns, 0.0, alpha);
      }
      for (std::size_t i = 0; i < g.rows(); ++i) {
        double* out_r = g.re.data() + i * g.cols();
        double* out_i = g.im.data() + i * g.cols();
        for (std::size_t j = 0; j < g.cols(); ++j) {
          double pr = out_r[j] * vrow[j].real() - out_i[j] * vrow[j].imag();
          double pi = out_r[j] * vrow[j].imag() + out_i[j] * vrow[j].real();
          out_r[j] = pr;
          out_i[j] = pi;
        }
      }
    }
  }
  return g;
}

struct GridStats {
  double value = 0.0;
  double tail = 0.0;
  double rho = 0.0;
};

GridStats grid_stats(const Grid& g) {
  GridStats st;
  st.value = g.value();
  double inner = 0.0, outer = 0.0;
  g.shells(&inner, &outer);
  if (outer <= 0.0) {
    st.rho = 99.0;
    st.tail = 0.0;
  } else if (inner <= outer) {
    st.rho = 0.0;
    st.tail = outer * 8.0;  // no measurable decay; crude overestimate
  } else {
    st.rho = 2.0 - std::log2(outer / inner);
    double x = std::pow(2.0, 2.0 - st.rho);
    st.tail = outer * x / (1.0 - x);
  }
  return st;
}

}  // namespace

std::complex<double> v_function(double lo, double hi, double c_d, int d, double c_t,
                                double theta, const QuadratureConfig& cfg) {
  if (!(hi > lo)) return {0.0, 0.0};
  Factor f{lo, hi, c_d, c_t};
  NodeSet n1 = factor_nodes(f, d, theta, 1.0, 1.0, cfg.max_phase_per_panel, 1);
  NodeSet n2 = factor_nodes(f, d, theta, 1.0, 1.0, cfg.max_phase_per_panel, 2);
  std::complex<double> v1 = eval_nodes(n1, 1.0, 1.0);
  std::complex<double> v2 = eval_nodes(n2, 1.0, 1.0);
  if (std::abs(v1 - v2) > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(v2)))
    throw QuadratureDivergence("panel doubling moved the oscillatory integral");
  return v2;
}

std::complex<double> k_kernel(const model::SystemSpec& spec,
                              const std::vector<double>& eta, double beta_d,
                              double alpha_theta, double P,
                              const QuadratureConfig& cfg) {
  std::complex<double> prod{1.0, 0.0};
  for (const Factor& f : factors_of(spec, eta, P))
    prod *= v_function(f.lo, f.hi, f.c_d * beta_d, spec.d, f.c_t * alpha_theta,
                       spec.theta, cfg);
  return prod;
}

TentSeries tent_series(const model::SystemSpec& spec, const std::vector<double>& eta,
                       double P, const std::vector<double>& ts,
                       const QuadratureConfig& cfg, int threads) {
  (void)threads;  // the grid accumulation is kept serial for determinism
  model::validate(spec);
  auto dp = model::derive_params(spec);
  if (dp.delta_cap <= 0.0) {
    std::ostringstream msg;
    msg << "decay exponent " << dp.delta_cap
        << " is not positive; the density integral has no convergent tail";
    throw NotAbsolutelyConvergent(msg.str());
  }
  auto fs = factors_of(spec, eta, P);

  double bound_d = 0.0, bound_t = 0.0;
  for (const Factor& f : fs) {
    bound_d += std::abs(f.c_d) * std::pow(f.hi, spec.d);
    bound_t += std::abs(f.c_t) * std::pow(f.hi, spec.theta);
  }
  // Nyquist: tuple sums live in [-bound, bound], tent smearing adds 1, and the
  // 1.25 margin keeps every nonzero lattice sample strictly outside.
  double h_d = 1.0 / (1.25 * (bound_d + 1.0));
  double h_t = 1.0 / (1.25 * (bound_t + 1.0));

  long long n_d = 192, n_t = 192;
  bool fixed_radius = cfg.truncation_radius > 0.0;
  if (fixed_radius) {
    n_d = std::max<long long>(32, static_cast<long long>(std::ceil(cfg.truncation_radius / h_d)));
    n_t = std::max<long long>(32, static_cast<long long>(std::ceil(cfg.truncation_radius / h_t)));
  }

  Grid coarse;
  GridStats st;
  for (int growth = 0;; ++growth) {
    coarse = build_grid(fs, spec.d, spec.theta, n_d, n_t, h_d, h_t, cfg);
    st = grid_stats(coarse);
    if (fixed_radius) break;
    double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(st.value));
    if (st.rho > 2.1 && st.tail <= target) break;
    if (growth >= 2) {
      if (st.rho <= 2.1)
        throw NotAbsolutelyConvergent(
            "measured kernel decay stays at or below the integrable threshold");
      throw QuadratureDivergence("kernel tail exceeds tolerance after radius growth");
    }
    n_d *= 2;
    n_t *= 2;
  }

  // Same radius, halved steps: aliasing and step error check.
  Grid fine = build_grid(fs, spec.d, spec.theta, 2 * n_d, 2 * n_t, h_d / 2.0,
                         h_t / 2.0, cfg);
  GridStats stf = grid_stats(fine);
  double refine = std::abs(st.value - stf.value) / std::max(std::abs(stf.value), 1e-300);
  if (refine > 0.02)
    throw QuadratureDivergence("step refinement moved the density integral");

  TentSeries out;
  out.base.value = stf.value;
  out.base.tail_estimate = stf.tail;
  out.base.refine_change = refine;
  out.base.decay_fitted = stf.rho;
  out.base.radius_d = static_cast<double>(n_d) * h_d;
  out.base.radius_t = static_cast<double>(n_t) * h_t;
  out.base.grid_nodes = static_cast<long long>(fine.rows() * fine.cols());
  for (double T : ts) out.j_of_t.emplace_back(T, fine.value_tent(T));
  return out;
}

JZeroResult j_zero(const model::SystemSpec& spec, const std::vector<double>& eta,
                   double P, const QuadratureConfig& cfg, int threads) {
  return tent_series(spec, eta, P, {}, cfg, threads).base;
}

PhysicalResult j_t_physical(const model::SystemSpec& spec,
                            const std::vector<double>& eta, double P, double T,
                            const QuadratureConfig& cfg, int threads) {
  model::validate(spec);
  auto fs = factors_of(spec, eta, P);
  int dims = static_cast<int>(fs.size());
  double vol = 1.0;
  for (const Factor& f : fs) vol *= f.hi - f.lo;
  const long long kShifts = 8;
  long long per = std::max<long long>(1, cfg.mc_samples / kShifts);
  auto means = parallel_chunks<double>(
      kShifts, 1, threads, [&](long long s0, long long) {
        double acc = 0.0;
        for (long long k = 0; k < per; ++k) {
          auto pt = quad::kronecker_point(static_cast<std::uint64_t>(k), dims, cfg.seed,
                                          static_cast<std::uint64_t>(s0));
          double F = 0.0, D = 0.0;
          for (int c = 0; c < dims; ++c) {
            double g = fs[c].lo + pt[c] * (fs[c].hi - fs[c].lo);
            if (fs[c].c_t != 0.0) F += fs[c].c_t * std::pow(g, spec.theta);
            if (fs[c].c_d != 0.0) {
              double gp = 1.0;
              for (int r = 0; r < spec.d; ++r) gp *= g;
              D += fs[c].c_d * gp;
            }
          }
          acc += kernels::psi_tent(F, T) * kernels::psi_tent(D, T);
        }
        return acc / static_cast<double>(per);
      });
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(kShifts);
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= static_cast<double>(kShifts - 1);
  PhysicalResult res;
  res.value = vol * mean;
  res.err = vol * std::sqrt(var / static_cast<double>(kShifts));
  res.err = std::max(res.err, 1e-4 * std::abs(res.value) + 1e-12);
  res.samples = per * kShifts;
  return res;
}

JTResult j_t(const model::SystemSpec& spec, const std::vector<double>& eta, double P,
             double T, const QuadratureConfig& cfg, int threads) {
  TentSeries ts = tent_series(spec, eta, P, {T}, cfg, threads);
  PhysicalResult ph = j_t_physical(spec, eta, P, T, cfg, threads);
  JTResult r;
  r.T = T;
  r.spectral = ts.j_of_t.front().second;
  r.spectral_tail =
      ts.base.tail_estimate + ts.base.refine_change * std::abs(r.spectral);
  r.physical = ph.value;
  r.physical_err = ph.err;
  double gap = std::abs(r.spectral - r.physical);
  double tol = 3.0 * (r.spectral_tail + ph.err) + 1e-9;
  if (gap > tol) {
    std::ostringstream msg;
    msg << "spectral " << r.spectral << " and volume " << r.physical
        << " routes disagree by " << gap << " against tolerance " << tol;
    throw RouteMismatch(msg.str());
  }
  return r;
}

}  // namespace mixsys::integral
