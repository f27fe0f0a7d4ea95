#pragma once

// Series kernels shared by the rest of the library: the generalized
// hypergeometric 0Fq with integer lower parameters (entire for q >= 1, so a
// plain ascending series with a relative stopping rule is enough), the
// principal-branch complex log-Gamma, and the modified Bessel function I1.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "hbcs/errors.hpp"
#include "hbcs/summation.hpp"

namespace hbcs::specfun {

inline constexpr std::size_t kTermCap = 10000;
inline constexpr double kTermStopRel = 1e-17;

// 0Fq([]; lower; argument).  No upper parameters: every member of the family
// used here is entire, and the term ratio argument/((n+1) * prod(b+n)) decays
// super-geometrically once n is past |argument|^(1/(q+1)).
template <class Scalar>
struct HypergeometricSpec {
    std::vector<int> lower; // lower parameters, each >= 1
    Scalar argument{};
};

namespace detail {

inline bool finite(double x) { return std::isfinite(x); }
inline bool finite(std::complex<double> x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
}

inline double magnitude(double x) { return std::fabs(x); }
inline double magnitude(std::complex<double> x) { return std::abs(x); }

} // namespace detail

// Ascending series with compensated accumulation in a fixed sequential order.
// Stops once the term magnitude stays below kTermStopRel of the running sum
// for two consecutive terms; a convergence_error past kTermCap terms is the
// only other exit, there is no silent truncation.
template <class Scalar>
Scalar eval_0Fq(const HypergeometricSpec<Scalar>& spec) {
    if (spec.lower.empty())
        throw std::domain_error("eval_0Fq: empty lower parameter list");
    for (int b : spec.lower)
        if (b < 1)
            throw std::domain_error("eval_0Fq: lower parameter < 1");
    if (!detail::finite(spec.argument))
        throw std::domain_error("eval_0Fq: non-finite argument");

    accumulator<Scalar> acc;
    Scalar term = Scalar(1);
    acc.add(term);
    int small_streak = 0;
    for (std::size_t n = 0; n < kTermCap; ++n) {
        double denom = static_cast<double>(n) + 1.0;
        for (int b : spec.lower)
            denom *= static_cast<double>(b) + static_cast<double>(n);
        term *= spec.argument / denom;
        acc.add(term);
        if (detail::magnitude(term) <= kTermStopRel * detail::magnitude(acc.value())) {
            if (++small_streak >= 2)
                return acc.value();
        } else {
            small_streak = 0;
        }
    }
    throw convergence_error("eval_0Fq: term cap reached", kTermCap);
}

template <class Scalar>
Scalar eval_0Fq(std::vector<int> lower, Scalar argument) {
    return eval_0Fq(HypergeometricSpec<Scalar>{std::move(lower), argument});
}

// Principal-branch log Gamma: argument-shift recursion into |s| >= 12, then
// the Stirling series.  The recursion log G(s) = log G(s+1) - log s holds
// branch-exactly on the right half plane, and the result is the continuous
// log-Gamma that is real on the positive axis.
inline std::complex<double> log_gamma(std::complex<double> s) {
    if (s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real()))
        throw pole_error("log_gamma: pole at non-positive integer");

    // B_{2k} / (2k (2k-1)) for the Stirling correction series.
    static const double stirling[] = {
        1.0 / 12.0,           -1.0 / 360.0,         1.0 / 1260.0,
        -1.0 / 1680.0,        1.0 / 1188.0,         -691.0 / 360360.0,
        1.0 / 156.0,          -3617.0 / 122400.0,   43867.0 / 244188.0,
        -174611.0 / 125400.0,
    };

    std::complex<double> shift_log = 0.0;
    while (s.real() < 12.0) {
        shift_log += std::log(s);
        s += 1.0;
    }

    const std::complex<double> ls = std::log(s);
    std::complex<double> result = (s - 0.5) * ls - s + 0.5 * std::log(2.0 * M_PI);
    const std::complex<double> inv2 = 1.0 / (s * s);
    std::complex<double> pow_inv = 1.0 / s;
    for (double c : stirling) {
        result += c * pow_inv;
        pow_inv *= inv2;
    }
    return result - shift_log;
}

// I1 by its ascending series, written through the 0F1 kernel:
// I1(y) = (y/2) * 0F1([2]; y^2/4).  All terms are positive, so there is no
// cancellation and the series is accurate over the whole working range.
inline double bessel_i1(double y) {
    if (!(y >= 0.0))
        throw std::domain_error("bessel_i1: negative or non-finite argument");
    return 0.5 * y * eval_0Fq<double>({{2}, 0.25 * y * y});
}

} // namespace hbcs::specfun
