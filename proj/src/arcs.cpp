#include "mixsys/arcs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mixsys::arcs {

double DissectionParams::m_lower() const { return std::pow(P, -theta + delta0); }
double DissectionParams::m_upper() const { return std::pow(P, omega_used); }
double DissectionParams::arc_width() const {
  return std::pow(P, -static_cast<double>(d) + xi_used);
}
long long DissectionParams::q_bound() const {
  return static_cast<long long>(std::floor(std::pow(P, xi_used)));
}

DissectionParams make_dissection(double P, const model::SystemSpec& spec,
                                 const model::DerivedParams& dp) {
  DissectionParams params;
  params.P = P;
  params.theta = spec.theta;
  params.d = spec.d;
  params.delta0 = dp.delta0;
  params.omega_used = dp.omega_used;
  params.xi_used = dp.xi_used;
  params.omega_is_effective = dp.omega_used != std::exp(dp.log5_omega * std::log(5.0));
  params.xi_is_effective = dp.xi_used != dp.xi_theoretical;
  return params;
}

ArcLabel classify(expsum::PhasePoint p, const DissectionParams& params) {
  double at = std::abs(p.alpha_theta);
  if (at >= params.m_upper()) return {ArcKind::Trivial, 0, 0};
  if (at >= params.m_lower()) return {ArcKind::MinorInequality, 0, 0};
  // alpha_theta is central; the alpha_d coordinate decides, mod 1.
  double ad = p.alpha_d - std::floor(p.alpha_d);
  long long Q = params.q_bound();
  Rational r = nearest_rational(ad, Q);
  if (r.q <= Q && r.err < params.arc_width())
    return {ArcKind::MajorP, r.q, ((r.a % r.q) + r.q) % r.q};
  return {ArcKind::MinorRational, 0, 0};
}

Rational nearest_rational(double alpha, long long Q) {
  if (Q < 1) Q = 1;
  // Convergents of the continued fraction of alpha.
  long long p_prev = 1, q_prev = 0;
  long long p_cur = static_cast<long long>(std::floor(alpha));
  long long q_cur = 1;
  double x = alpha - std::floor(alpha);
  for (int it = 0; it < 64; ++it) {
    if (x == 0.0) break;
    double inv = 1.0 / x;
    if (inv > 9.0e15) break;  // next convergent is beyond double resolution
    long long ai = static_cast<long long>(std::floor(inv));
    long long q_next = ai * q_cur + q_prev;
    if (q_next > Q) {
      // Semiconvergent refinement: largest j with j*q_cur + q_prev <= Q; take
      // it only when it beats the convergent as a second-kind approximation
      // and still meets its own Dirichlet bound.
      long long j = (Q - q_prev) / q_cur;
      if (j >= 1) {
        long long qs = j * q_cur + q_prev;
        long long ps = j * p_cur + p_prev;
        double err_s = std::abs(alpha - static_cast<double>(ps) / static_cast<double>(qs));
        double err_c = std::abs(alpha - static_cast<double>(p_cur) / static_cast<double>(q_cur));
        if (static_cast<double>(qs) * err_s < static_cast<double>(q_cur) * err_c &&
            err_s <= 1.0 / (static_cast<double>(qs) * static_cast<double>(Q + 1)))
          return {ps, qs, err_s};
      }
      break;
    }
    long long p_next = ai * p_cur + p_prev;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    x = inv - static_cast<double>(ai);
  }
  double err = std::abs(alpha - static_cast<double>(p_cur) / static_cast<double>(q_cur));
  return {p_cur, q_cur, err};
}

std::vector<MajorArc> major_arcs(const DissectionParams& params) {
  std::vector<MajorArc> arcs;
  long long Q = params.q_bound();
  double w = params.arc_width();
  for (long long q = 1; q <= Q; ++q) {
    for (long long a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1 && !(a == 0 && q == 1)) continue;
      double center = static_cast<double>(a) / static_cast<double>(q);
      arcs.push_back({q, a, std::max(0.0, center - w), std::min(1.0, center + w)});
    }
  }
  // Disjointness per the dissection computation: distinct centers differ by at
  // least 1/(q1 q2) >= P^{-2 xi}, which exceeds the combined width 2 P^{-d+xi}.
  std::vector<MajorArc> sorted = arcs;
  std::sort(sorted.begin(), sorted.end(),
            [](const MajorArc& l, const MajorArc& r) { return l.lo < r.lo; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i - 1].hi > sorted[i].lo)
      throw CertificationError("major arcs overlap; P too small for this xi");
  return arcs;
}

double total_arc_measure(const std::vector<MajorArc>& arcs) {
  double acc = 0.0;
  for (const auto& arc : arcs) acc += arc.hi - arc.lo;
  return acc;
}

}  // namespace mixsys::arcs
