#pragma once

#include <cmath>
#include <complex>
#include <span>

namespace magnon {

using real_ext = long double;

/// Neumaier (improved Kahan) running sum.
template <class T = real_ext>
class CompensatedSum {
public:
    constexpr CompensatedSum() = default;
    constexpr explicit CompensatedSum(T init) : sum_(init) {}

    void add(T x) {
        const T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    // Absorb another accumulator: its running sum and its carried error.
    void add(const CompensatedSum& other) {
        add(other.sum_);
        add(other.comp_);
    }

    CompensatedSum& operator+=(T x) {
        add(x);
        return *this;
    }

    T value() const { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

template <class T = real_ext>
class CompensatedComplexSum {
public:
    void add(std::complex<T> z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    void add(const CompensatedComplexSum& other) {
        re_.add(other.re_);
        im_.add(other.im_);
    }
    std::complex<T> value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum<T> re_;
    CompensatedSum<T> im_;
};

template <class T>
real_ext compensated_sum(std::span<const T> xs) {
    CompensatedSum<> acc;
    for (const auto& x : xs) acc.add(static_cast<real_ext>(x));
    return acc.value();
}

inline constexpr real_ext pi_ext = 3.141592653589793238462643383279502884L;

}  // namespace magnon
