#pragma once
// Frozen reference values. Generated by tests/oracles/generate.py;
// regenerate with: python3 tests/oracles/generate.py > tests/oracle_values.hpp

namespace oracle {

// ---- exponential sums
inline constexpr double kGSum123Re = 6.413398156390774558512;  // sum_{x<=50} e(0.123 x^2.5), 50-digit
inline constexpr double kGSum123Im = 8.224402287354543823703;
inline constexpr double kS523Re = 5.078252949175171727667e-50;  // S(5,2,3) cubic complete sum
inline constexpr double kS523Im = 3.616641329875574066157e-49;
inline constexpr double kGaussRatioMaxQ300 = 1.414213562373095048802;  // max |S(q,a)|/sqrt(q), q <= 300

// ---- oscillatory quadrature
inline constexpr double kVFactorRe = -0.07777170754824504394097;  // int_{0.2}^{0.8} e(3.5 g^2 - 2.25 g^2.5) dg
inline constexpr double kVFactorIm = 0.03691819120312383899317;
inline constexpr double kFresnel5Re = 0.1115510435166638744952;  // int_0^1 e(5 x^2) dx
inline constexpr double kFresnel5Im = 0.09589989423347145653892;
inline constexpr double kSi1 = 0.9460830703671830149414;  // sine integral
inline constexpr double kSi10 = 1.658347594218874049331;
inline constexpr double kSi100 = 1.562225466889056293352;
inline constexpr double kCosTail23A5 = -0.00007643828424765659465690;  // int_5^inf cos(2 pi 2.3 t)/t^2 dt
inline constexpr double kSinPi03 = 0.8090169943749474036011;  // sin(pi 0.3)
inline constexpr double kCosPi03 = 0.5877852522924731573862;

// ---- interpolation weight system
inline constexpr double kWeightsDeskW1 = 10.00283505757266571539;
inline constexpr double kWeightsDeskW2 = -9.502835057572665715391;
inline constexpr double kWeightsDeskW3 = -9.050454105191713334439;
inline constexpr double kWeightsDeskW4 = 9.550454105191713334439;
inline constexpr double kWeightsFeasW1 = 0.08796296296296296296296;
inline constexpr double kWeightsFeasW2 = 0.07870370370370370370370;
inline constexpr double kWeightsFeasW3 = 0.4358465608465608465608;
inline constexpr double kWeightsFeasW4 = 0.3974867724867724867725;

// ---- exact counts, quadratic system
//   F = x1^2.5 + 2 x2^2.5 - y1^2.5 - 3 y2^2.5, |F| < 0.5
//   D = x1^2 - 2 x2^2 + z1^2 - z2^2 = 0,  boxes (0.2 P, 0.8 P]
inline constexpr long long kQuadCountP40 = 3;
inline constexpr long long kQuadCountP60 = 7;
inline constexpr long long kQuadCountP80 = 9;
inline constexpr long long kQuadCountP120 = 17;

// ---- rational-arc density sums (complex arithmetic, ~1e-9 accurate)
inline constexpr double kQuadSeriesQ150 = 0.7097458210750168250414;  // quadratic system, Q=150
inline constexpr double kWideSeriesQ160 = 1.083349634559552576718;  // wide system, Q=160
inline constexpr double kQuadEulerP3K1 = 0.7777777777777777901136;  // quadratic, mod 3
inline constexpr double kQuadEulerP3K2 = 0.8518518518518518600757;  // quadratic, mod 9
inline constexpr double kQuadEulerP7K1 = 1.122448979591836648595;  // quadratic, mod 7

// ---- best rational approximations (second kind), exhaustive
inline constexpr long long kPiA = 1;  // alpha=0.14159265, Q=100
inline constexpr long long kPiQ = 7;
inline constexpr long long kThreeTenths9A = 2;  // alpha=0.3, Q=9
inline constexpr long long kThreeTenths9Q = 7;
inline constexpr long long kThreeTenths10A = 3;  // alpha=0.3, Q=10
inline constexpr long long kThreeTenths10Q = 10;
inline constexpr long long kHalfSqrt2A = 29;  // alpha=np.float64(0.7071067811865476), Q=50
inline constexpr long long kHalfSqrt2Q = 41;

// ---- real density of (D, F) at the origin, quadratic system,
// unit boxes (0.2, 0.8]^6. Triangular-kernel Monte Carlo estimate,
// Richardson-extrapolated in the bandwidth; statistical error is
// below 0.2 percent, kQuadJ0Tol is a generous envelope.
inline constexpr double kQuadJ0 = 0.02438375671595758090171;  // density estimate
inline constexpr double kQuadJ0Tol = 0.0002438375671595758176907;  // envelope

}  // namespace oracle
