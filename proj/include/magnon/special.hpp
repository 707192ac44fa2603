#pragma once

// Self-contained special functions: Bessel J_n by ascending series and the
// exact combinatorial symbols used by the derivative and Taylor formulas.

#include <cmath>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "magnon/errors.hpp"
#include "magnon/numeric.hpp"

namespace magnon {

using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

inline bigint factorial(unsigned n) {
    bigint f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

inline bigint binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

/// (a + b + c)! / (a! b! c!)
inline bigint multinomial(unsigned a, unsigned b, unsigned c) {
    return factorial(a + b + c) / (factorial(a) * factorial(b) * factorial(c));
}

/// 2F1(-kbar, -kbar - q; q + 1; 1), a terminating series.
inline rational hyp2f1_terminating(int kbar, int q) {
    if (kbar < 0 || q < 0) throw validation_error("hyp2f1_terminating needs kbar >= 0 and q >= 0");
    rational term = 1;
    rational sum = 1;
    for (int j = 0; j < kbar; ++j) {
        // t_{j+1} / t_j = (-kbar + j)(-kbar - q + j) / ((q + 1 + j)(j + 1))
        term *= rational(bigint(-kbar + j) * bigint(-kbar - q + j), bigint(q + 1 + j) * bigint(j + 1));
        sum += term;
    }
    return sum;
}

/// 4^-q C(2q, q).
inline rational alpha(int q) {
    if (q < 0) throw validation_error("alpha needs q >= 0");
    return rational(binomial(2 * q, q), bigint(1) << (2 * q));
}

inline constexpr int bessel_max_order = 128;
inline constexpr double bessel_max_argument = 100.0;

namespace detail {

template <class Float>
Float bessel_series(int order, const Float& x) {
    using std::abs;
    const Float half = x / 2;
    const Float half_sq = half * half;
    Float term = 1;
    for (int i = 1; i <= order; ++i) term *= half / i;
    Float sum = term;
    const Float eps = std::numeric_limits<Float>::epsilon();
    for (int k = 0;; ++k) {
        term *= -half_sq / (Float(k + 1) * Float(k + 1 + order));
        sum += term;
        // terms grow until k ~ x/2, then decay monotonically
        if (Float(k) > half && abs(term) <= eps * abs(sum)) break;
        if (term == 0) break;
    }
    return sum;
}

}  // namespace detail

/// J_n(x) for integer 0 <= n <= 128 and 0 <= x <= 100, absolute error <= 1e-13.
inline double bessel_j(int order, double x) {
    if (order < 0 || order > bessel_max_order || !(x >= 0.0) || x > bessel_max_argument)
        throw capability_error("bessel_j supports 0 <= order <= 128 and 0 <= x <= 100 (got order " +
                               std::to_string(order) + ", x " + std::to_string(x) + ")");
    if (x == 0.0) return order == 0 ? 1.0 : 0.0;
    if (x <= 8.0) return static_cast<double>(detail::bessel_series<real_ext>(order, x));
    // the alternating terms peak near e^x / sqrt(2 pi x); carry enough digits to absorb the cancellation
    using wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<60>>;
    return static_cast<double>(detail::bessel_series<wide>(order, wide(x)));
}

template <class Float = double>
Float to_float(const rational& r) {
    return static_cast<Float>(r);
}

}  // namespace magnon
