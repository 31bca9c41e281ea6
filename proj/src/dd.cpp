#include "mixsys/dd.hpp"

#include <array>
#include <stdexcept>

namespace mixsys::dd {

namespace {
// 1/k! for k = 0..17, rounded to dd.
const std::array<DD, 18> kInvFact = {{
    {1.0, 0.0},
    {1.0, 0.0},
    {5.0e-01, 0.0},
    {1.6666666666666666e-01, 9.25185853854297066e-18},
    {4.1666666666666664e-02, 2.31296463463574266e-18},
    {8.3333333333333332e-03, 1.15648231731787138e-19},
    {1.3888888888888889e-03, -5.30054395437357706e-20},
    {1.9841269841269841e-04, 1.72095582934207053e-22},
    {2.4801587301587302e-05, 2.15119478667758816e-23},
    {2.7557319223985893e-06, -1.85839327404647208e-22},
    {2.7557319223985888e-07, 2.37677146222502973e-23},
    {2.5052108385441720e-08, -1.44881407093591197e-24},
    {2.0876756987868100e-09, -1.20734505911325997e-25},
    {1.6059043836821613e-10, 1.25852945887520981e-26},
    {1.1470745597729725e-11, 2.06555127528307454e-28},
    {7.6471637318198164e-13, 7.03872877733453001e-30},
    {4.7794773323873853e-14, 4.39920548583408126e-31},
    {2.8114572543455206e-15, 1.65088427308614326e-31},
}};
}  // namespace

DD exp(const DD& a) {
  // exp(a) = 2^m * exp(r)^(2^9) with r = (a - m log 2)/512, |r| small enough
  // that a short Taylor series is exact to well past dd precision.
  if (a.hi > 709.0) throw std::overflow_error("dd::exp overflow");
  if (a.hi < -709.0) return DD{0.0};
  double m = std::floor(a.hi / kLog2.hi + 0.5);
  DD r = sub(a, mul(kLog2, m));
  r = div(r, 512.0);

  DD sum = add(DD{1.0}, r);
  DD p = r;
  for (int k = 2; k <= 12; ++k) {
    p = mul(p, r);
    sum = add(sum, mul(p, kInvFact[k]));
  }
  for (int i = 0; i < 9; ++i) sum = mul(sum, sum);
  return mul(sum, std::ldexp(1.0, static_cast<int>(m)));
}

DD log(const DD& a) {
  // Newton refinement of the double-precision logarithm: y1 = y0 + a e^{-y0} - 1.
  if (a.hi <= 0.0) throw std::domain_error("dd::log domain");
  DD y{std::log(a.hi)};
  for (int i = 0; i < 2; ++i) {
    DD e = exp(neg(y));
    y = add(add(y, mul(a, e)), -1.0);
  }
  return y;
}

DD pow(const DD& x, const DD& p) { return exp(mul(log(x), p)); }

DD pow(double x, double p) { return exp(mul(log(DD{x}), p)); }

DD powi(const DD& x, long long k) {
  if (k < 0) throw std::domain_error("dd::powi negative exponent");
  DD r{1.0};
  DD b = x;
  while (k) {
    if (k & 1) r = mul(r, b);
    b = mul(b, b);
    k >>= 1;
  }
  return r;
}

}  // namespace mixsys::dd
