#include "mixsys/counting.hpp"

#include <mpfr.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mixsys/dd.hpp"
#include "mixsys/expsum.hpp"
#include "mixsys/parallel.hpp"
#include "mixsys/simd.hpp"

namespace mixsys::counting {
namespace {

// Window margin on double keys; dd and rounding errors at desk scale sit many
// orders below it, so everything outside the shell is decided by the key.
constexpr double kShell = 1e-6;
constexpr double kDDMargin = 1e-18;
constexpr double kMpfrMargin = 1e-30;

long long checked_pow_ll(long long x, int d) {
  long long r = 1;
  for (int i = 0; i < d; ++i) {
    if (x != 0 && std::llabs(r) > (2LL << 61) / std::llabs(x))
      throw RangeOverflow("x^d exceeds the integer width");
    r *= x;
  }
  return r;
}

void check_ranges(const std::vector<Coord>& coords, int d) {
  for (const auto& c : coords) {
    long long hi = std::max(std::llabs(c.hi), std::llabs(c.lo));
    long long pw = checked_pow_ll(hi, d);
    if (c.d_coeff != 0 && pw > 0 &&
        std::llabs(c.d_coeff) > ((2LL << 61) / pw) / std::max<long long>(coords.size(), 1))
      throw RangeOverflow("sum of d_coeff x^d can exceed the integer width");
  }
}

struct CoordTable {
  std::vector<dd::DD> f_val;    // f_coeff * x^theta for x in (lo, hi]
  std::vector<long long> d_val; // d_coeff * x^d
  long long len = 0;
};

CoordTable build_table(const Coord& c, double theta, int d) {
  CoordTable t;
  t.len = std::max<long long>(0, c.hi - c.lo);
  t.f_val.reserve(static_cast<std::size_t>(t.len));
  t.d_val.reserve(static_cast<std::size_t>(t.len));
  for (long long x = c.lo + 1; x <= c.hi; ++x) {
    dd::DD p = dd::pow(dd::DD{static_cast<double>(x)}, dd::DD{theta});
    t.f_val.push_back(dd::mul(p, c.f_coeff));
    t.d_val.push_back(c.d_coeff * checked_pow_ll(x, d));
  }
  return t;
}

enum class Cert { In, Out, Boundary };

// 50-digit recomputation of |sum f_coeff x^theta| vs thresh.
Cert certify_mpfr(const std::vector<Coord>& coords, const std::vector<long long>& tuple,
                  double theta, double thresh) {
  mpfr_t acc, term, th;
  mpfr_init2(acc, 200);
  mpfr_init2(term, 200);
  mpfr_init2(th, 200);
  mpfr_set_zero(acc, 1);
  mpfr_set_d(th, theta, MPFR_RNDN);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].f_coeff == 0.0) continue;
    mpfr_set_si(term, static_cast<long>(tuple[i]), MPFR_RNDN);
    mpfr_pow(term, term, th, MPFR_RNDN);
    mpfr_mul_d(term, term, coords[i].f_coeff, MPFR_RNDN);
    mpfr_add(acc, acc, term, MPFR_RNDN);
  }
  mpfr_abs(acc, acc, MPFR_RNDN);
  mpfr_sub_d(acc, acc, thresh, MPFR_RNDN);
  double diff = mpfr_get_d(acc, MPFR_RNDN);
  mpfr_clear(acc);
  mpfr_clear(term);
  mpfr_clear(th);
  if (diff < -kMpfrMargin) return Cert::In;
  if (diff > kMpfrMargin) return Cert::Out;
  return Cert::Boundary;
}

Cert certify_dd(const dd::DD& f, double thresh) {
  dd::DD a = dd::abs(f);
  double diff = dd::add(a, -thresh).to_double();
  if (diff < -kDDMargin) return Cert::In;
  if (diff > kDDMargin) return Cert::Out;
  return Cert::Boundary;
}

struct Record {
  long long d_sum;
  double f_hi;
  double f_lo;
  std::uint64_t idx;
};

// Enumerate every tuple of the given coordinate subset into records.
// idx is the mixed-radix encoding with the last subset coordinate fastest,
// matching decode_a in count_generic.
std::vector<Record> enumerate_half(const std::vector<CoordTable>& tabs,
                                   const std::vector<std::size_t>& subset) {
  std::uint64_t total = 1;
  for (std::size_t ci : subset) total *= static_cast<std::uint64_t>(tabs[ci].len);
  std::vector<Record> recs;
  if (total == 0) return recs;
  recs.reserve(total);
  std::uint64_t it = 0;
  auto rec = [&](auto&& self, std::size_t k, dd::DD f, long long dsum) -> void {
    if (k == subset.size()) {
      recs.push_back({dsum, f.hi, f.lo, it++});
      return;
    }
    const CoordTable& t = tabs[subset[k]];
    for (long long p = 0; p < t.len; ++p)
      self(self, k + 1, dd::add(f, t.f_val[static_cast<std::size_t>(p)]),
           dsum + t.d_val[static_cast<std::size_t>(p)]);
  };
  rec(rec, 0, dd::DD{0.0}, 0);
  return recs;
}

}  // namespace

GenericCount count_generic(const std::vector<Coord>& coords, double theta, int d,
                           double thresh, Method method, int threads) {
  check_ranges(coords, d);
  GenericCount out;
  if (coords.empty()) return out;
  std::vector<CoordTable> tabs;
  tabs.reserve(coords.size());
  for (const auto& c : coords) tabs.push_back(build_table(c, theta, d));
  for (const auto& t : tabs)
    if (t.len == 0) return out;

  if (method == Method::Brute) {
    std::vector<std::size_t> all(coords.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::size_t> pos(coords.size(), 0);
    std::vector<long long> tuple(coords.size());
    // plain odometer over all coordinates
    for (;;) {
      dd::DD f{0.0};
      long long dsum = 0;
      for (std::size_t k = 0; k < coords.size(); ++k) {
        f = dd::add(f, tabs[k].f_val[pos[k]]);
        dsum += tabs[k].d_val[pos[k]];
      }
      if (dsum == 0) {
        Cert c = certify_dd(f, thresh);
        if (c == Cert::Boundary) {
          for (std::size_t k = 0; k < coords.size(); ++k)
            tuple[k] = coords[k].lo + 1 + static_cast<long long>(pos[k]);
          c = certify_mpfr(coords, tuple, theta, thresh);
        }
        if (c == Cert::In) ++out.count;
        if (c == Cert::Boundary) ++out.near_boundary;
      }
      std::size_t k = coords.size();
      while (k > 0) {
        if (++pos[k - 1] < static_cast<std::size_t>(tabs[k - 1].len)) break;
        pos[k - 1] = 0;
        --k;
      }
      if (k == 0) break;
    }
    if (out.near_boundary > 0)
      throw UncertifiedBoundary("undecided tuples on the threshold at 50 digits");
    return out;
  }

  // MITM: split coordinates into halves with balanced products.
  std::vector<std::size_t> order(coords.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return tabs[a].len > tabs[b].len;
  });
  std::vector<std::size_t> half_a, half_b;
  double log_a = 0.0, log_b = 0.0;
  for (std::size_t ci : order) {
    double lg = std::log(static_cast<double>(tabs[ci].len));
    if (log_a <= log_b) {
      half_a.push_back(ci);
      log_a += lg;
    } else {
      half_b.push_back(ci);
      log_b += lg;
    }
  }
  if (half_b.empty()) {
    half_b.push_back(half_a.back());
    half_a.pop_back();
  }
  // Memory cap: shift coordinates to half B until A fits.
  auto half_size = [&](const std::vector<std::size_t>& h) {
    std::uint64_t total = 1;
    for (std::size_t ci : h) total *= static_cast<std::uint64_t>(tabs[ci].len);
    return total;
  };
  while (half_a.size() > 1 && half_size(half_a) > (1ULL << 23)) {
    half_b.push_back(half_a.back());
    half_a.pop_back();
  }
  if (half_size(half_a) > (1ULL << 23))
    throw RangeOverflow("half-A table exceeds the record cap");

  std::vector<Record> recs = enumerate_half(tabs, half_a);
  std::sort(recs.begin(), recs.end(), [](const Record& l, const Record& r) {
    return l.d_sum != r.d_sum ? l.d_sum < r.d_sum : l.f_hi < r.f_hi;
  });

  // Decode an A-record back into coordinate values (boundary shell only).
  auto decode_a = [&](std::uint64_t idx, std::vector<long long>& tuple) {
    for (std::size_t k = half_a.size(); k > 0; --k) {
      std::size_t ci = half_a[k - 1];
      std::uint64_t len = static_cast<std::uint64_t>(tabs[ci].len);
      tuple[ci] = coords[ci].lo + 1 + static_cast<long long>(idx % len);
      idx /= len;
    }
  };

  std::uint64_t b_total = half_size(half_b);
  long long chunk = std::max<long long>(1, static_cast<long long>(b_total / 256));
  struct ChunkOut {
    long long count = 0;
    long long near = 0;
  };
  auto results = parallel_chunks<ChunkOut>(
      static_cast<long long>(b_total), chunk, threads,
      [&](long long b_lo, long long b_hi) {
        ChunkOut co;
        std::vector<long long> tuple(coords.size());
        for (long long bi = b_lo; bi < b_hi; ++bi) {
          std::uint64_t rem = static_cast<std::uint64_t>(bi);
          dd::DD fb{0.0};
          long long db = 0;
          for (std::size_t k = half_b.size(); k > 0; --k) {
            std::size_t ci = half_b[k - 1];
            std::uint64_t len = static_cast<std::uint64_t>(tabs[ci].len);
            std::size_t p = static_cast<std::size_t>(rem % len);
            rem /= len;
            fb = dd::add(fb, tabs[ci].f_val[p]);
            db += tabs[ci].d_val[p];
          }
          long long target = -db;
          auto block_lo = std::lower_bound(
              recs.begin(), recs.end(), target, [](const Record& r, long long t) {
                return r.d_sum < t;
              });
          if (block_lo == recs.end() || block_lo->d_sum != target) continue;
          auto block_hi = std::upper_bound(
              block_lo, recs.end(), target, [](long long t, const Record& r) {
                return t < r.d_sum;
              });
          double lb = -thresh - fb.hi;
          double ub = thresh - fb.hi;
          auto it_lo = std::lower_bound(block_lo, block_hi, lb + kShell,
                                        [](const Record& r, double v) { return r.f_hi < v; });
          auto it_hi = std::lower_bound(block_lo, block_hi, ub - kShell,
                                        [](const Record& r, double v) { return r.f_hi < v; });
          co.count += it_hi - it_lo;
          // Shell on each side: decided individually in dd, then 50 digits.
          auto shell_scan = [&](double from, double to) {
            auto s_lo = std::lower_bound(block_lo, block_hi, from,
                                         [](const Record& r, double v) { return r.f_hi < v; });
            auto s_hi = std::lower_bound(block_lo, block_hi, to,
                                         [](const Record& r, double v) { return r.f_hi < v; });
            for (auto it = s_lo; it != s_hi; ++it) {
              dd::DD f = dd::add(dd::DD{it->f_hi, it->f_lo}, fb);
              Cert c = certify_dd(f, thresh);
              if (c == Cert::Boundary) {
                decode_a(it->idx, tuple);
                std::uint64_t brem = static_cast<std::uint64_t>(bi);
                for (std::size_t k = half_b.size(); k > 0; --k) {
                  std::size_t ci = half_b[k - 1];
                  std::uint64_t len = static_cast<std::uint64_t>(tabs[ci].len);
                  tuple[ci] = coords[ci].lo + 1 + static_cast<long long>(brem % len);
                  brem /= len;
                }
                c = certify_mpfr(coords, tuple, theta, thresh);
              }
              if (c == Cert::In) ++co.count;
              if (c == Cert::Boundary) ++co.near;
            }
          };
          shell_scan(lb - kShell, lb + kShell);
          shell_scan(ub - kShell, ub + kShell);
        }
        return co;
      });
  for (const auto& co : results) {
    out.count += co.count;
    out.near_boundary += co.near;
  }
  if (out.near_boundary > 0)
    throw UncertifiedBoundary("undecided tuples on the threshold at 50 digits");
  return out;
}

CountResult count_solutions(const model::SystemSpec& spec, const std::vector<double>& eta,
                            long long P, Method method, int threads) {
  auto t0 = std::chrono::steady_clock::now();
  std::size_t ell = spec.lambda.size(), m = spec.mu.size(), n = spec.b_coeffs.size();
  std::vector<Coord> coords;
  coords.reserve(ell + m + n);
  double Pd = static_cast<double>(P);
  for (std::size_t i = 0; i < ell; ++i)
    coords.push_back({expsum::box_lo(eta[i], Pd), expsum::box_hi(eta[i], Pd),
                      spec.lambda[i], spec.a_coeffs[i]});
  for (std::size_t j = 0; j < m; ++j)
    coords.push_back({expsum::box_lo(eta[ell + j], Pd), expsum::box_hi(eta[ell + j], Pd),
                      spec.mu[j], 0});
  for (std::size_t k = 0; k < n; ++k)
    coords.push_back({expsum::box_lo(eta[ell + m + k], Pd),
                      expsum::box_hi(eta[ell + m + k], Pd), 0.0, spec.b_coeffs[k]});
  GenericCount gc = count_generic(coords, spec.theta, spec.d, spec.tau, method, threads);
  auto t1 = std::chrono::steady_clock::now();
  CountResult res;
  res.P = P;
  res.count = gc.count;
  res.method = method;
  res.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  res.near_boundary = gc.near_boundary;
  return res;
}

long long count_vt(long long lo, long long hi, double delta, double theta, int t,
                   Method method) {
  std::vector<Coord> coords;
  for (int i = 0; i < t; ++i) coords.push_back({lo, hi, 1.0, 0});
  for (int i = 0; i < t; ++i) coords.push_back({lo, hi, -1.0, 0});
  if (hi <= lo) return 0;
  return count_generic(coords, theta, 2, delta, method).count;
}

long long count_z(ZKind kind, const model::SystemSpec& spec,
                  const std::vector<double>& eta, double P, double kappa,
                  const ZConfig& cfg, Method method) {
  std::size_t ell = spec.lambda.size(), m = spec.mu.size();
  std::size_t i = static_cast<std::size_t>(cfg.index_i);
  std::size_t jk = static_cast<std::size_t>(cfg.index_jk);
  double thresh = 1.0 / (2.0 * kappa);
  std::vector<Coord> coords;
  long long xlo = expsum::box_lo(eta[i], P), xhi = expsum::box_hi(eta[i], P);
  if (kind == ZKind::Z1) {
    long long ylo = expsum::box_lo(eta[ell + jk], P), yhi = expsum::box_hi(eta[ell + jk], P);
    for (int u = 0; u < cfg.t1; ++u) {
      coords.push_back({xlo, xhi, spec.lambda[i], spec.a_coeffs[i]});
      coords.push_back({xlo, xhi, -spec.lambda[i], -spec.a_coeffs[i]});
    }
    for (int u = 0; u < cfg.t2; ++u) {
      coords.push_back({ylo, yhi, spec.mu[jk], 0});
      coords.push_back({ylo, yhi, -spec.mu[jk], 0});
    }
  } else {
    long long zlo = expsum::box_lo(eta[ell + m + jk], P),
              zhi = expsum::box_hi(eta[ell + m + jk], P);
    for (int u = 0; u < cfg.t1; ++u) {
      coords.push_back({xlo, xhi, spec.lambda[i], spec.a_coeffs[i]});
      coords.push_back({xlo, xhi, -spec.lambda[i], -spec.a_coeffs[i]});
    }
    for (int u = 0; u < cfg.t2; ++u) {
      coords.push_back({zlo, zhi, 0.0, spec.b_coeffs[jk]});
      coords.push_back({zlo, zhi, 0.0, -spec.b_coeffs[jk]});
    }
  }
  return count_generic(coords, spec.theta, spec.d, thresh, method).count;
}

namespace {

double moment_pass(int t, long long P, double kappa, double theta, int d, int threads,
                   double step_scale, long long* grid_points) {
  double h_d = step_scale * std::pow(static_cast<double>(P), -static_cast<double>(d));
  double h_t = step_scale * std::pow(static_cast<double>(P), -theta);
  long long n_d = static_cast<long long>(std::ceil(1.0 / h_d));
  long long n_t = static_cast<long long>(std::ceil(2.0 * kappa / h_t));
  h_d = 1.0 / static_cast<double>(n_d);
  h_t = 2.0 * kappa / static_cast<double>(n_t);
  *grid_points = n_d * n_t;

  expsum::PowTable tab(0, P, theta, d);
  std::size_t terms = static_cast<std::size_t>(P);
  // Rotation between adjacent alpha_theta columns: e(h_t x^theta).
  std::vector<double> rot_re(terms), rot_im(terms);
  {
    dd::DD ht{h_t};
    for (std::size_t x = 0; x < terms; ++x) {
      double cyc = 2.0 * dd::fract(dd::mul(ht, tab.pow_theta[x])).to_double();
      double s, c;
      simd::scalar_backend().sincospi(&cyc, &s, &c, 1);
      rot_re[x] = c;
      rot_im[x] = s;
    }
  }
  const long long kResync = 2048;
  auto rows = parallel_chunks<double>(
      n_d, std::max<long long>(1, n_d / 512), threads, [&](long long r0, long long r1) {
        const auto& be = simd::backend();
        std::vector<double> acc_re(terms), acc_im(terms), cycles(terms);
        double acc = 0.0, comp = 0.0;
        for (long long rd = r0; rd < r1; ++rd) {
          double alpha_d = (static_cast<double>(rd) + 0.5) * h_d;
          for (long long ct = 0; ct < n_t; ++ct) {
            double re, im;
            if (ct % kResync == 0) {
              // Rebuild the phases exactly at this column.
              dd::DD at{-kappa + (static_cast<double>(ct) + 0.5) * h_t};
              dd::DD ad{alpha_d};
              for (std::size_t x = 0; x < terms; ++x) {
                dd::DD ph = dd::add(dd::mul(ad, dd::from_i64(tab.pow_d[x])),
                                    dd::mul(at, tab.pow_theta[x]));
                cycles[x] = 2.0 * dd::fract(ph).to_double();
              }
              be.sincospi(cycles.data(), acc_im.data(), acc_re.data(), terms);
              re = 0.0;
              im = 0.0;
              for (std::size_t x = 0; x < terms; ++x) {
                re += acc_re[x];
                im += acc_im[x];
              }
            } else {
              be.rotate_accumulate(acc_re.data(), acc_im.data(), rot_re.data(),
                                   rot_im.data(), terms, &re, &im);
            }
            double mag = re * re + im * im;
            double pw = 1.0;
            for (int u = 0; u < t; ++u) pw *= mag;
            double y = pw - comp;
            double s = acc + y;
            comp = (s - acc) - y;
            acc = s;
          }
        }
        return acc * h_d * h_t;
      });
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

}  // namespace

MomentResult moment_estimate(int t, long long P, double kappa, double theta, int d,
                             int threads) {
  MomentResult res;
  if (P <= 0) return res;
  long long g1 = 0, g2 = 0;
  double coarse = moment_pass(t, P, kappa, theta, d, threads, 0.1, &g1);
  double fine = moment_pass(t, P, kappa, theta, d, threads, 0.05, &g2);
  res.value = fine;
  res.grid_points = g2;
  res.refine_change = fine != 0.0 ? std::abs(coarse - fine) / std::abs(fine) : 0.0;
  if (res.refine_change > 0.05) {
    std::ostringstream msg;
    msg << "grid refinement moved the moment by " << res.refine_change * 100.0 << "%";
    throw GridTooCoarse(msg.str());
  }
  return res;
}

}  // namespace mixsys::counting
