#pragma once
// Double-double arithmetic: an unevaluated sum hi+lo of two doubles giving
// roughly 31 significant digits. Used wherever phases alpha*x^theta must be
// reduced mod 1 without losing the fractional part to cancellation.
#include <cmath>
#include <cstdint>

namespace mixsys::dd {

struct DD {
  double hi = 0.0;
  double lo = 0.0;
  DD() = default;
  constexpr DD(double h) : hi(h), lo(0.0) {}
  constexpr DD(double h, double l) : hi(h), lo(l) {}
  double to_double() const { return hi + lo; }
};

// Error-free transforms. two_sum assumes nothing about magnitudes;
// quick_two_sum requires |a| >= |b|.
inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DD add(const DD& a, const DD& b) {
  DD s = two_sum(a.hi, b.hi);
  DD t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DD add(const DD& a, double b) {
  DD s = two_sum(a.hi, b);
  s.lo += a.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DD sub(const DD& a, const DD& b) { return add(a, DD{-b.hi, -b.lo}); }
inline DD neg(const DD& a) { return {-a.hi, -a.lo}; }

inline DD mul(const DD& a, const DD& b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline DD mul(const DD& a, double b) {
  DD p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return quick_two_sum(p.hi, p.lo);
}

inline DD div(const DD& a, const DD& b) {
  double q1 = a.hi / b.hi;
  DD r = sub(a, mul(b, q1));
  double q2 = r.hi / b.hi;
  r = sub(r, mul(b, q2));
  double q3 = r.hi / b.hi;
  DD q = quick_two_sum(q1, q2);
  return add(q, q3);
}

inline DD div(const DD& a, double b) { return div(a, DD{b}); }

inline bool less(const DD& a, const DD& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}

inline DD abs(const DD& a) { return a.hi < 0 || (a.hi == 0 && a.lo < 0) ? neg(a) : a; }

// floor(a) exact for |a| within double integer range.
inline DD floor(const DD& a) {
  double fh = std::floor(a.hi);
  if (fh != a.hi) return {fh, 0.0};
  double fl = std::floor(a.lo);
  return quick_two_sum(fh, fl);
}

// Fractional part in [0,1). The hi part of the result carries the phase that
// the complex exponential actually sees; cancellation against the integer part
// happens here in full dd precision.
inline DD fract(const DD& a) {
  DD f = sub(a, floor(a));
  if (f.hi >= 1.0) f = add(f, -1.0);
  if (f.hi < 0.0) f = add(f, 1.0);
  return f;
}

// Exact dd image of a 64-bit integer (hi rounds, lo carries the remainder).
inline DD from_i64(long long v) {
  double hi = static_cast<double>(v);
  double lo = static_cast<double>(v - static_cast<long long>(hi));
  return {hi, lo};
}

DD exp(const DD& a);
DD log(const DD& a);

// x^p for positive x, arbitrary real p, via exp(p*log(x)).
DD pow(const DD& x, const DD& p);
DD pow(double x, double p);

// x^k for integer k >= 0 by binary powering.
DD powi(const DD& x, long long k);

inline constexpr DD kLog2{6.931471805599452862e-01, 2.319046813846299558e-17};
inline constexpr DD kPi{3.141592653589793116e+00, 1.224646799147353207e-16};

}  // namespace mixsys::dd
