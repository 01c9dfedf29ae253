// bessel.hpp: Bessel functions of the first kind and their positive zeros

#pragma once

namespace qb {

inline constexpr int kBesselMaxOrder = 200;
inline constexpr double kBesselMaxArgument = 100.0;

// J_n(x) for |n| <= 200, |x| <= 100. Power series for small arguments,
// normalized Miller downward recurrence otherwise.
double bessel_j(int order, double x);

// k-th positive zero of J_order (order in [0, 50], k in [1, 20]); the root
// must lie below kBesselMaxArgument.
double bessel_j_zero(int order, int k);

// k-th positive zero of J_0, k in [1, 20].
double bessel_j0_zero(int k);

}  // namespace qb
