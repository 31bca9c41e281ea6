#include "mixsys/anchor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mixsys/rng.hpp"

namespace mixsys::anchor {
namespace {

struct Rows {
  std::vector<double> rf, rd;  // Jacobian rows
};

Rows jacobian(const model::SystemSpec& spec, const std::vector<double>& v) {
  std::size_t ell = spec.lambda.size(), m = spec.mu.size(), n = spec.b_coeffs.size();
  Rows rows;
  rows.rf.assign(v.size(), 0.0);
  rows.rd.assign(v.size(), 0.0);
  for (std::size_t i = 0; i < ell; ++i) {
    rows.rf[i] = spec.theta * spec.lambda[i] * std::pow(v[i], spec.theta - 1.0);
    rows.rd[i] = spec.d * static_cast<double>(spec.a_coeffs[i]) *
                 std::pow(v[i], spec.d - 1.0);
  }
  for (std::size_t j = 0; j < m; ++j)
    rows.rf[ell + j] = spec.theta * spec.mu[j] * std::pow(v[ell + j], spec.theta - 1.0);
  for (std::size_t k = 0; k < n; ++k)
    rows.rd[ell + m + k] = spec.d * static_cast<double>(spec.b_coeffs[k]) *
                           std::pow(v[ell + m + k], spec.d - 1.0);
  return rows;
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Condition number of a 2x2 matrix via its singular values.
double cond2(double a, double b, double c, double d) {
  double frob = a * a + b * b + c * c + d * d;
  double det = a * d - b * c;
  double disc = std::sqrt(std::max(0.0, frob * frob - 4.0 * det * det));
  double smax = std::sqrt(0.5 * (frob + disc));
  double smin2 = 0.5 * (frob - disc);
  if (smin2 <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / std::sqrt(smin2);
}

struct MinorPick {
  std::size_t c1 = 0, c2 = 1;
  double cond = std::numeric_limits<double>::infinity();
  double det = 0.0;
};

MinorPick best_minor(const Rows& rows) {
  MinorPick best;
  std::size_t s = rows.rf.size();
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j) {
      double det = rows.rf[i] * rows.rd[j] - rows.rf[j] * rows.rd[i];
      double c = cond2(rows.rf[i], rows.rf[j], rows.rd[i], rows.rd[j]);
      if (c < best.cond) best = {i, j, c, det};
    }
  }
  return best;
}

double scale_f(const model::SystemSpec& spec, const std::vector<double>& v) {
  std::size_t ell = spec.lambda.size();
  double s = 0.0;
  for (std::size_t i = 0; i < ell; ++i)
    s = std::max(s, std::abs(spec.lambda[i]) * std::pow(v[i], spec.theta));
  for (std::size_t j = 0; j < spec.mu.size(); ++j)
    s = std::max(s, std::abs(spec.mu[j]) * std::pow(v[ell + j], spec.theta));
  return s;
}

double scale_d(const model::SystemSpec& spec, const std::vector<double>& v) {
  std::size_t ell = spec.lambda.size(), m = spec.mu.size();
  double s = 0.0;
  for (std::size_t i = 0; i < ell; ++i)
    s = std::max(s, std::abs(static_cast<double>(spec.a_coeffs[i])) *
                        std::pow(v[i], spec.d));
  for (std::size_t k = 0; k < spec.b_coeffs.size(); ++k)
    s = std::max(s, std::abs(static_cast<double>(spec.b_coeffs[k])) *
                        std::pow(v[ell + m + k], spec.d));
  return s;
}

}  // namespace

double form_f(const model::SystemSpec& spec, const std::vector<double>& v) {
  std::size_t ell = spec.lambda.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < ell; ++i) acc += spec.lambda[i] * std::pow(v[i], spec.theta);
  for (std::size_t j = 0; j < spec.mu.size(); ++j)
    acc += spec.mu[j] * std::pow(v[ell + j], spec.theta);
  return acc;
}

double form_d(const model::SystemSpec& spec, const std::vector<double>& v) {
  std::size_t ell = spec.lambda.size(), m = spec.mu.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < ell; ++i)
    acc += static_cast<double>(spec.a_coeffs[i]) * std::pow(v[i], spec.d);
  for (std::size_t k = 0; k < spec.b_coeffs.size(); ++k)
    acc += static_cast<double>(spec.b_coeffs[k]) * std::pow(v[ell + m + k], spec.d);
  return acc;
}

AnchorSolution find_anchor(const model::SystemSpec& spec, std::uint64_t seed) {
  model::validate(spec);
  std::size_t s = static_cast<std::size_t>(spec.s());
  double best_res = std::numeric_limits<double>::infinity();
  for (std::uint64_t restart = 0; restart < 64; ++restart) {
    std::vector<double> v(s);
    for (std::size_t i = 0; i < s; ++i)
      v[i] = rng::uniform(seed, restart, static_cast<std::uint64_t>(i), 0.1, 0.4);
    bool ok = false;
    for (int it = 0; it < 80; ++it) {
      double fv = form_f(spec, v);
      double dv = form_d(spec, v);
      double sf = scale_f(spec, v), sd = scale_d(spec, v);
      if (std::abs(fv) <= 1e-13 * sf && std::abs(dv) <= 1e-13 * sd) {
        ok = true;
        break;
      }
      Rows rows = jacobian(spec, v);
      MinorPick pick = best_minor(rows);
      if (!std::isfinite(pick.cond)) break;
      double a = rows.rf[pick.c1], b = rows.rf[pick.c2];
      double c = rows.rd[pick.c1], d = rows.rd[pick.c2];
      double det = a * d - b * c;
      double dx1 = (-fv * d + dv * b) / det;
      double dx2 = (-dv * a + fv * c) / det;
      // Damp so both coordinates stay strictly positive.
      double lam = 1.0;
      while (lam > 1e-6 && (v[pick.c1] + lam * dx1 <= 1e-8 || v[pick.c2] + lam * dx2 <= 1e-8))
        lam *= 0.5;
      v[pick.c1] += lam * dx1;
      v[pick.c2] += lam * dx2;
      best_res = std::min(best_res, std::abs(fv) / std::max(sf, 1e-300) +
                                        std::abs(dv) / std::max(sd, 1e-300));
    }
    if (!ok) continue;
    // Homogeneous rescale into (0, 1/2); zeros are preserved.
    double vmax = *std::max_element(v.begin(), v.end());
    double t = 0.45 / vmax;
    for (double& x : v) x *= t;
    RankReport rk = rank_and_condition(spec, v);
    if (rk.rank != 2) continue;
    AnchorSolution sol;
    sol.eta = v;
    sol.residual_f = std::abs(form_f(spec, v));
    sol.residual_d = std::abs(form_d(spec, v));
    Rows rows = jacobian(spec, v);
    sol.jacobian_cols.resize(s);
    for (std::size_t i = 0; i < s; ++i) sol.jacobian_cols[i] = {rows.rf[i], rows.rd[i]};
    sol.rank2 = true;
    sol.best_minor_cond = rk.best_minor_cond;
    return sol;
  }
  std::ostringstream msg;
  msg << "no anchor after 64 restarts; best scaled residual " << best_res;
  throw NoAnchorFound(msg.str());
}

RankReport rank_and_condition(const model::SystemSpec& spec,
                              const std::vector<double>& eta) {
  Rows rows = jacobian(spec, eta);
  MinorPick pick = best_minor(rows);
  double rn = norm(rows.rf) * norm(rows.rd);
  RankReport rep;
  rep.best_minor_cond = pick.cond;
  double best_det = 0.0;
  std::size_t s = rows.rf.size();
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i + 1; j < s; ++j)
      best_det = std::max(best_det,
                          std::abs(rows.rf[i] * rows.rd[j] - rows.rf[j] * rows.rd[i]));
  rep.best_minor_det = rn > 0.0 ? best_det / rn : 0.0;
  if (rn > 0.0 && best_det > 1e-8 * rn)
    rep.rank = 2;
  else if (norm(rows.rf) > 0.0 || norm(rows.rd) > 0.0)
    rep.rank = 1;
  return rep;
}

namespace {

long long powmod_ll(long long z, long long e, long long mod) {
  __int128 r = 1 % mod, base = ((z % mod) + mod) % mod;
  while (e > 0) {
    if (e & 1) r = r * base % mod;
    base = static_cast<__int128>(base) * base % mod;
    e >>= 1;
  }
  return static_cast<long long>(r);
}

long long inv_mod(long long a, long long mod) {
  long long t = 0, new_t = 1, r = mod, new_r = ((a % mod) + mod) % mod;
  while (new_r != 0) {
    long long q = r / new_r;
    std::swap(t -= q * new_t, new_t);
    std::swap(r -= q * new_r, new_r);
  }
  return ((t % mod) + mod) % mod;
}

int val_p(long long x, long long p) {
  if (x == 0) return 1 << 20;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

std::vector<long long> primes_up_to(long long n) {
  std::vector<bool> sieve(static_cast<std::size_t>(std::max<long long>(n + 1, 2)), true);
  std::vector<long long> out;
  for (long long i = 2; i <= n; ++i) {
    if (!sieve[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (long long j = i * i; j <= n; j += i) sieve[static_cast<std::size_t>(j)] = false;
  }
  return out;
}

std::vector<long long> prime_factors(long long x) {
  std::vector<long long> out;
  x = std::llabs(x);
  for (long long p = 2; p * p <= x; ++p)
    if (x % p == 0) {
      out.push_back(p);
      while (x % p == 0) x /= p;
    }
  if (x > 1) out.push_back(x);
  return out;
}

// All d-form coefficients in block order (x block then z block).
std::vector<long long> eq_coeffs(const model::SystemSpec& spec) {
  std::vector<long long> c(spec.a_coeffs.begin(), spec.a_coeffs.end());
  c.insert(c.end(), spec.b_coeffs.begin(), spec.b_coeffs.end());
  return c;
}

long long eval_eq_mod(const std::vector<long long>& coeffs,
                      const std::vector<long long>& x, int d, long long mod) {
  __int128 acc = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    long long pw = powmod_ll(x[i], d, mod);
    acc += static_cast<__int128>(((coeffs[i] % mod) + mod) % mod) * pw;
  }
  return static_cast<long long>(((acc % mod) + mod) % mod);
}

}  // namespace

std::vector<PadicVerdict> check_padic(const model::SystemSpec& spec,
                                      long long prime_bound) {
  std::vector<long long> coeffs = eq_coeffs(spec);
  std::vector<long long> primes = primes_up_to(std::max<long long>(prime_bound, 2));
  for (long long p : prime_factors(spec.d))
    if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
  for (long long c : coeffs)
    for (long long p : prime_factors(c))
      if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
  std::sort(primes.begin(), primes.end());

  std::vector<PadicVerdict> out;
  for (long long p : primes) {
    int K = val_p(spec.d, p);
    int nu = 2 * K + 1;
    long long M = 1;
    for (int i = 0; i < nu; ++i) {
      if (M > 5000 / p) {
        std::ostringstream msg;
        msg << "residue search mod " << p << "^" << nu << " exceeds budget";
        throw SearchSpaceTooLarge(msg.str());
      }
      M *= p;
    }
    std::size_t nvar = coeffs.size();
    std::size_t Ms = static_cast<std::size_t>(M);

    std::vector<long long> pow_tab(Ms);
    for (std::size_t r = 0; r < Ms; ++r)
      pow_tab[r] = powmod_ll(static_cast<long long>(r), spec.d, M);

    // Layered reachability over partial sums mod M. "good" marks chains where
    // some chosen coordinate already has gradient valuation <= K, the Hensel
    // lifting criterion at exactness 2K+1.
    constexpr std::int32_t kNone = -1;
    auto layer = [&] { return std::vector<std::int32_t>(Ms, kNone); };
    std::vector<std::vector<std::int32_t>> any_r(nvar + 1, layer()),
        any_prev_s(nvar + 1, layer()), good_r(nvar + 1, layer()),
        good_prev_s(nvar + 1, layer());
    std::vector<std::vector<std::int8_t>> good_new(nvar + 1,
                                                   std::vector<std::int8_t>(Ms, 0));
    std::vector<bool> any_cur(Ms, false), good_cur(Ms, false);
    any_cur[0] = true;
    for (std::size_t t = 0; t < nvar; ++t) {
      std::vector<bool> any_next(Ms, false), good_next(Ms, false);
      long long c = ((coeffs[t] % M) + M) % M;
      std::vector<std::int8_t> grad_good(Ms);
      for (std::size_t r = 0; r < Ms; ++r) {
        long long g = static_cast<long long>(
            static_cast<__int128>(spec.d) * c % M *
            powmod_ll(static_cast<long long>(r), spec.d - 1, M) % M);
        grad_good[r] = (g != 0 && val_p(g, p) <= K) ? 1 : 0;
      }
      for (std::size_t s0 = 0; s0 < Ms; ++s0) {
        if (!any_cur[s0]) continue;
        for (std::size_t r = 0; r < Ms; ++r) {
          std::size_t s1 =
              static_cast<std::size_t>((s0 + static_cast<std::size_t>(
                                                 static_cast<__int128>(c) * pow_tab[r] % M)) %
                                       Ms);
          if (any_r[t + 1][s1] == kNone) {
            any_next[s1] = true;
            any_r[t + 1][s1] = static_cast<std::int32_t>(r);
            any_prev_s[t + 1][s1] = static_cast<std::int32_t>(s0);
          }
          bool makes_good = good_cur[s0] || grad_good[r];
          if (makes_good && good_r[t + 1][s1] == kNone) {
            good_next[s1] = true;
            good_r[t + 1][s1] = static_cast<std::int32_t>(r);
            good_prev_s[t + 1][s1] = static_cast<std::int32_t>(s0);
            good_new[t + 1][s1] = good_cur[s0] ? 0 : 1;
          }
        }
      }
      any_cur = std::move(any_next);
      good_cur = std::move(good_next);
    }

    PadicVerdict verdict;
    verdict.prime = p;
    verdict.lifted_to = M;
    verdict.nonsingular = good_cur[0];
    if (verdict.nonsingular) {
      std::vector<long long> w(nvar, 0);
      std::size_t s_cur = 0;
      bool in_good = true;
      for (std::size_t t = nvar; t > 0; --t) {
        if (in_good) {
          w[t - 1] = good_r[t][s_cur];
          bool introduced = good_new[t][s_cur] == 1;
          s_cur = static_cast<std::size_t>(good_prev_s[t][s_cur]);
          if (introduced) in_good = false;
        } else {
          w[t - 1] = any_r[t][s_cur];
          s_cur = static_cast<std::size_t>(any_prev_s[t][s_cur]);
        }
      }
      if (eval_eq_mod(coeffs, w, spec.d, M) != 0)
        throw CertificationError("witness backtrack lost the congruence");
      verdict.witness = w;

      // Newton lift on the lowest-valuation gradient coordinate: from
      // exactness p^j with derivative valuation v, one step reaches p^{2(j-v)}.
      std::size_t best_i = 0;
      int best_v = 1 << 20;
      for (std::size_t i = 0; i < nvar; ++i) {
        long long g = static_cast<long long>(
            static_cast<__int128>(spec.d) * (((coeffs[i] % M) + M) % M) % M *
            powmod_ll(w[i], spec.d - 1, M) % M);
        if (g == 0) continue;
        int v = val_p(g, p);
        if (v < best_v) {
          best_v = v;
          best_i = i;
        }
      }
      int j = nu;
      while (best_v <= K) {
        int j_next = 2 * (j - best_v);
        if (j_next <= j) break;
        double mag = static_cast<double>(j_next) * std::log(static_cast<double>(p));
        if (mag > std::log(1e12)) break;
        long long mod_next = 1;
        for (int i = 0; i < j_next; ++i) mod_next *= p;
        long long fy = eval_eq_mod(coeffs, w, spec.d, mod_next);
        long long pv = 1;
        for (int i = 0; i < best_v; ++i) pv *= p;
        long long g = static_cast<long long>(
            static_cast<__int128>(spec.d) * (((coeffs[best_i] % mod_next) + mod_next) % mod_next) %
            mod_next * powmod_ll(w[best_i], spec.d - 1, mod_next) % mod_next);
        long long u = (g / pv) % (mod_next / pv);
        long long step = static_cast<long long>(
            static_cast<__int128>(fy / pv) * inv_mod(u, mod_next / pv) %
            (mod_next / pv));
        w[best_i] = ((w[best_i] - step) % mod_next + mod_next) % mod_next;
        if (eval_eq_mod(coeffs, w, spec.d, mod_next) != 0)
          throw CertificationError("Hensel lift failed to preserve the congruence");
        j = j_next;
        long long Mj = mod_next;
        verdict.lifted_to = Mj;
        verdict.witness = w;
      }
    }
    out.push_back(std::move(verdict));
  }
  return out;
}

}  // namespace mixsys::anchor
