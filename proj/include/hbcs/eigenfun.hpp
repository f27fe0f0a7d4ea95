#pragma once

// The eigenfunction family E(r, x) = x^r * 0Fr([]; [2, 3, ..., r+1]; x),
// which solves the operator equation x^r d^(r+1)/dx^(r+1) E = E with
// E(r, 0) = 0, vanishing derivatives up to order r-1 and r-th derivative r!.
// For r = 1 this reduces to sqrt(x) * I1(2 sqrt(x)).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hbcs/errors.hpp"
#include "hbcs/specfun.hpp"
#include "hbcs/summation.hpp"

namespace hbcs::eigenfun {

struct EigenFunctionSpec {
    int r = 1; // order, >= 1
};

namespace detail {

inline void check(const EigenFunctionSpec& spec) {
    if (spec.r < 1)
        throw std::domain_error("eigenfun: order r must be >= 1");
}

} // namespace detail

inline double eval_E(const EigenFunctionSpec& spec, double x) {
    detail::check(spec);
    if (!(x >= 0.0))
        throw std::domain_error("eval_E: negative or non-finite argument");
    std::vector<int> lower(spec.r);
    for (int k = 0; k < spec.r; ++k)
        lower[k] = k + 2;
    return std::pow(x, spec.r) * specfun::eval_0Fq<double>({std::move(lower), x});
}

inline double eval_E(int r, double x) { return eval_E(EigenFunctionSpec{r}, x); }

// Derivatives at x = 0 up to order r: all zero except the r-th, which is r!.
// These are exact rational values of the series, not numerical estimates.
inline std::vector<double> derivatives_at_zero(const EigenFunctionSpec& spec) {
    detail::check(spec);
    std::vector<double> d(spec.r + 1, 0.0);
    double rfact = 1.0;
    for (int k = 2; k <= spec.r; ++k)
        rfact *= k;
    d[spec.r] = rfact;
    return d;
}

inline std::vector<double> derivatives_at_zero(int r) {
    return derivatives_at_zero(EigenFunctionSpec{r});
}

// x^r E^(r+1)(r, x) - E(r, x), with the (r+1)-th derivative taken term by
// term.  Writing E = sum_n c_n x^(n+r), the derivative series is
// sum_{n>=1} a_n x^(n-1) with a_1 = 1 and a_{n+1} = a_n / (n (n+1) ... (n+r)).
// Each a_n is formed here from its closed log-Gamma form rather than by the
// ratio chain; the chain would reproduce the eval_E rounding step for step
// and the residual would cancel identically instead of measuring anything.
inline double ode_residual(const EigenFunctionSpec& spec, double x) {
    detail::check(spec);
    if (!(x > 0.0))
        throw std::domain_error("ode_residual: argument must be positive");

    // ln a_n = sum_{k=0}^{r} [lnGamma(1+k) - lnGamma(n+k)]
    double lg_const = 0.0;
    for (int k = 0; k <= spec.r; ++k)
        lg_const += std::lgamma(static_cast<double>(1 + k));
    const double lx = std::log(x);

    accumulator<double> acc;
    int small_streak = 0;
    bool converged = false;
    for (std::size_t n = 1; n < specfun::kTermCap; ++n) {
        double lg = lg_const + (static_cast<double>(n) - 1.0) * lx;
        for (int k = 0; k <= spec.r; ++k)
            lg -= std::lgamma(static_cast<double>(n + k));
        const double term = std::exp(lg);
        acc.add(term);
        if (term <= specfun::kTermStopRel * acc.value()) {
            if (++small_streak >= 2) {
                converged = true;
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    if (!converged)
        throw convergence_error("ode_residual: term cap reached", specfun::kTermCap);

    return std::pow(x, spec.r) * acc.value() - eval_E(spec, x);
}

inline double ode_residual(int r, double x) { return ode_residual(EigenFunctionSpec{r}, x); }

} // namespace hbcs::eigenfun
