#include "qb/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qb/errors.hpp"

namespace qb {

namespace {

constexpr double kRescaleThreshold = 1e250;

// sum_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!), x >= 0
double series(int n, double x) {
    const double half = 0.5 * x;
    const double log_lead = n * std::log(half) - std::lgamma(n + 1.0);
    double term = std::exp(log_lead);
    if (term == 0.0) return 0.0;
    const double q = half * half;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= -q / (static_cast<double>(k) * (k + n));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Miller's algorithm: recur downward from an order well above max(n, x),
// normalize with J_0 + 2 sum_k J_{2k} = 1.
double miller(int n, double x) {
    const double top = std::max(static_cast<double>(n), x);
    int start = static_cast<int>(top + 30.0 + std::sqrt(60.0 * std::max(top, 1.0)));
    start += start % 2;

    double next = 0.0;   // J_{k+1}
    double cur = 1e-30;  // J_k
    double wanted = 0.0;
    double norm_sum = 0.0;  // sum over even k >= 2 of J_k
    for (int k = start; k >= 1; --k) {
        const double prev = (2.0 * k / x) * cur - next;  // J_{k-1}
        next = cur;
        cur = prev;
        if (k - 1 == n) wanted = cur;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm_sum += cur;
        if (std::abs(cur) > kRescaleThreshold) {
            cur /= kRescaleThreshold;
            next /= kRescaleThreshold;
            wanted /= kRescaleThreshold;
            norm_sum /= kRescaleThreshold;
        }
    }
    // cur now holds J_0
    return wanted / (cur + 2.0 * norm_sum);
}

double j_nonnegative(int n, double x) {
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    if (x <= 2.0) return series(n, x);
    return miller(n, x);
}

}  // namespace

double bessel_j(int order, double x) {
    if (!std::isfinite(x) || std::abs(order) > kBesselMaxOrder || std::abs(x) > kBesselMaxArgument) {
        std::ostringstream os;
        os << "bessel_j: arguments outside validated range (order " << order << ", x " << x
           << "); need |order| <= " << kBesselMaxOrder << ", |x| <= " << kBesselMaxArgument;
        throw InvalidArgument(os.str());
    }
    const int n = std::abs(order);
    // J_{-n} = (-1)^n J_n and J_n(-x) = (-1)^n J_n(x)
    int sign_flips = 0;
    if (order < 0) sign_flips += n;
    if (x < 0.0) sign_flips += n;
    const double value = j_nonnegative(n, std::abs(x));
    return (sign_flips % 2 == 0) ? value : -value;
}

double bessel_j_zero(int order, int k) {
    if (order < 0 || order > 50 || k < 1 || k > 20) {
        std::ostringstream os;
        os << "bessel_j_zero: need order in [0, 50] and k in [1, 20], got order " << order
           << ", k " << k;
        throw InvalidArgument(os.str());
    }
    constexpr double step = 0.05;
    double a = 1e-3;
    double fa = bessel_j(order, a);
    int found = 0;
    for (double b = a + step; b <= kBesselMaxArgument; b += step) {
        const double fb = bessel_j(order, b);
        if (fa == 0.0 || (fa < 0.0) != (fb < 0.0)) {
            if (++found == k) {
                double lo = a, hi = b, flo = fa;
                for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = bessel_j(order, mid);
                    if (fm == 0.0) return mid;
                    if ((fm < 0.0) == (flo < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                return 0.5 * (lo + hi);
            }
        }
        a = b;
        fa = fb;
    }
    throw InvalidArgument("bessel_j_zero: requested zero lies beyond the validated argument range");
}

double bessel_j0_zero(int k) { return bessel_j_zero(0, k); }

}  // namespace qb
