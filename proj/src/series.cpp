#include "mixsys/series.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <vector>

#include "mixsys/expsum.hpp"
#include "mixsys/parallel.hpp"

namespace mixsys::series {
namespace {

constexpr long long kModBudget = 4096;

std::vector<long long> primes_up_to(long long n) {
  std::vector<bool> comp(static_cast<std::size_t>(std::max<long long>(n + 1, 2)), false);
  std::vector<long long> out;
  for (long long p = 2; p <= n; ++p) {
    if (comp[static_cast<std::size_t>(p)]) continue;
    out.push_back(p);
    for (long long q = p * p; q <= n; q += p) comp[static_cast<std::size_t>(q)] = true;
  }
  return out;
}

std::vector<long long> system_d_coeffs(const model::SystemSpec& spec) {
  std::vector<long long> cs(spec.a_coeffs);
  cs.insert(cs.end(), spec.b_coeffs.begin(), spec.b_coeffs.end());
  return cs;
}

long long gcd_ll(long long a, long long b) {
  while (b) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

double scan_constant_uncached(int d, long long q_bound, int threads) {
  auto maxima = parallel_chunks<double>(
      q_bound, std::max<long long>(1, q_bound / 64), threads,
      [&](long long lo, long long hi) {
        double mx = 0.0;
        for (long long q = lo + 1; q <= hi; ++q)
          mx = std::max(mx, expsum::weyl_scan_q(q, d).max_ratio);
        return mx;
      });
  double mx = 0.0;
  for (double m : maxima) mx = std::max(mx, m);
  return mx;
}

}  // namespace

double empirical_gauss_constant(int d, long long q_bound, int threads) {
  static std::mutex mu;
  static std::map<std::pair<int, long long>, double> cache;
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find({d, q_bound});
    if (it != cache.end()) return it->second;
  }
  double val = scan_constant_uncached(d, q_bound, threads);
  std::lock_guard<std::mutex> lk(mu);
  cache[{d, q_bound}] = val;
  return val;
}

SeriesResult singular_series(const model::SystemSpec& spec, long long Q, int threads) {
  model::validate(spec);
  const auto coeffs = system_d_coeffs(spec);
  const int vars = static_cast<int>(coeffs.size());
  const int d = spec.d;

  auto chunks = parallel_chunks<std::vector<std::pair<long long, double>>>(
      Q, std::max<long long>(1, Q / 64), threads, [&](long long lo, long long hi) {
        std::vector<std::pair<long long, double>> rows;
        rows.reserve(static_cast<std::size_t>(hi - lo));
        for (long long q = lo + 1; q <= hi; ++q) {
          // All complete sums mod q once, then products over coprime a.
          std::vector<std::complex<double>> s_of(static_cast<std::size_t>(q));
          for (long long c = 0; c < q; ++c)
            s_of[static_cast<std::size_t>(c)] = expsum::complete_sum(q, c, d);
          std::complex<double> tq{0.0, 0.0};
          for (long long a = q == 1 ? 0 : 1; a < std::max<long long>(q, 1); ++a) {
            if (q > 1 && gcd_ll(a, q) != 1) continue;
            std::complex<double> prod{1.0, 0.0};
            for (long long c : coeffs) {
              long long idx = ((a * c) % q + q) % q;
              prod *= s_of[static_cast<std::size_t>(idx)];
            }
            tq += prod;
            if (q == 1) break;
          }
          double norm = std::pow(static_cast<double>(q), -static_cast<double>(vars));
          rows.emplace_back(q, tq.real() * norm);
        }
        return rows;
      });

  SeriesResult res;
  res.Q = Q;
  for (auto& rows : chunks)
    for (auto& row : rows) {
      res.partial_sum += row.second;
      res.per_q_terms.push_back(row);
    }

  res.empirical_constant = empirical_gauss_constant(d, 2000, threads);
  double decay = static_cast<double>(vars) / static_cast<double>(d) - 1.0;
  if (decay <= 1.0) {
    res.divergent_tail = true;
    res.tail_bound = std::numeric_limits<double>::infinity();
  } else {
    // sum_{q>Q} q^{-decay} <= Q^{1-decay} / (decay-1) by integral comparison.
    res.tail_bound = std::pow(res.empirical_constant, vars) *
                     std::pow(static_cast<double>(Q), 1.0 - decay) / (decay - 1.0);
  }
  return res;
}

double euler_factor(const model::SystemSpec& spec, long long p, int k) {
  if (k == 0) return 1.0;
  long long M = 1;
  for (int i = 0; i < k; ++i) {
    M *= p;
    if (M > kModBudget) {
      std::ostringstream msg;
      msg << "modulus " << p << "^" << k << " exceeds the enumeration budget";
      throw SearchSpaceTooLarge(msg.str());
    }
  }
  const auto coeffs = system_d_coeffs(spec);
  std::size_t m = static_cast<std::size_t>(M);
  // Residue distribution of each c x^d, then convolve probability vectors.
  std::vector<double> prob(m, 0.0);
  prob[0] = 1.0;
  std::vector<double> hist(m), next(m);
  for (long long c : coeffs) {
    std::fill(hist.begin(), hist.end(), 0.0);
    for (long long x = 0; x < M; ++x) {
      long long r = ((c % M) + M) % M;
      long long v = 1;
      for (int i = 0; i < spec.d; ++i) v = (v * x) % M;
      hist[static_cast<std::size_t>((r * v) % M)] += 1.0 / static_cast<double>(M);
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      if (prob[r] == 0.0) continue;
      for (std::size_t s = 0; s < m; ++s) {
        std::size_t t = r + s;
        if (t >= m) t -= m;
        next[t] += prob[r] * hist[s];
      }
    }
    prob.swap(next);
  }
  return prob[0] * static_cast<double>(M);
}

EulerFactorResult euler_factor_stabilized(const model::SystemSpec& spec, long long p,
                                          int k_max) {
  EulerFactorResult res;
  res.p = p;
  double prev = 1.0;
  long long M = 1;
  for (int k = 1; k <= k_max; ++k) {
    M *= p;
    if (M > kModBudget) break;
    double cur = euler_factor(spec, p, k);
    res.change_at_last_doubling =
        std::abs(cur - prev) / std::max(std::abs(cur), 1e-300);
    res.density = cur;
    res.k_used = k;
    prev = cur;
  }
  if (res.k_used == 0) {
    std::ostringstream msg;
    msg << "prime " << p << " exceeds the enumeration budget at k = 1";
    throw SearchSpaceTooLarge(msg.str());
  }
  return res;
}

double euler_product(const model::SystemSpec& spec, long long p_bound, int threads) {
  auto ps = primes_up_to(p_bound);
  auto factors = parallel_chunks<double>(
      static_cast<long long>(ps.size()), 4, threads, [&](long long lo, long long hi) {
        double prod = 1.0;
        for (long long i = lo; i < hi; ++i)
          prod *= euler_factor_stabilized(spec, ps[static_cast<std::size_t>(i)]).density;
        return prod;
      });
  double prod = 1.0;
  for (double f : factors) prod *= f;
  return prod;
}

}  // namespace mixsys::series
