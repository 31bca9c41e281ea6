#pragma once
// Dissection of [0,1) x R into major, minor, and trivial sets, plus the
// continued-fraction rational approximation used to locate rational arcs.
#include <vector>

#include "mixsys/expsum.hpp"
#include "mixsys/model.hpp"

namespace mixsys::arcs {

struct DissectionParams {
  double P = 0.0;
  double theta = 0.0;
  int d = 0;
  double delta0 = 0.0;
  double omega_used = 0.0;
  double xi_used = 0.0;
  bool omega_is_effective = true;
  bool xi_is_effective = true;

  double m_lower() const;   // P^{-theta+delta0}: floor of the inequality minor set
  double m_upper() const;   // P^{omega}: onset of the trivial set
  double arc_width() const; // P^{-d+xi}
  long long q_bound() const;  // floor(P^xi)
};

DissectionParams make_dissection(double P, const model::SystemSpec& spec,
                                 const model::DerivedParams& dp);

enum class ArcKind { MajorP, MinorInequality, MinorRational, Trivial };

struct ArcLabel {
  ArcKind kind = ArcKind::MajorP;
  long long q = 0;  // witness for MajorP
  long long a = 0;
};

// Exactly one label per point: strict "<" bounds for the central sets, "<="
// lower bound for the inequality minor set.
ArcLabel classify(expsum::PhasePoint p, const DissectionParams& params);

struct Rational {
  long long a = 0;
  long long q = 1;
  double err = 0.0;
};

// Best second-kind approximation with q <= Q via continued-fraction
// convergents plus a semiconvergent refinement; always satisfies
// |alpha - a/q| <= 1/(q (Q+1)).
Rational nearest_rational(double alpha, long long Q);

struct MajorArc {
  long long q = 0;
  long long a = 0;
  double lo = 0.0;  // interval clipped to [0,1)
  double hi = 0.0;
};

// All arcs with 0 <= a < q <= P^xi, gcd(a,q)=1, ascending (q, a);
// asserts pairwise disjointness.
std::vector<MajorArc> major_arcs(const DissectionParams& params);

double total_arc_measure(const std::vector<MajorArc>& arcs);

}  // namespace mixsys::arcs
