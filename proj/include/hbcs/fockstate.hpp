#pragma once

// Fock-space machinery for the coherent-state family |z>_r spanned by
// |r>, |r+1>, ...: normalization function N_r, truncated state construction,
// overlaps, the generalized lowering operator (a+)^r a^(r+1), and the signed
// Stirling numbers behind its nonlinear-coherent-state form a f_r(n).

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hbcs/errors.hpp"
#include "hbcs/exactint.hpp"
#include "hbcs/specfun.hpp"

namespace hbcs::fockstate {

using complex = std::complex<double>;

// Exact integer constants attached to one order r.
struct NormalizationContext {
    int r = 1;
    mpz_class b_r;  // prod_{k=0}^{r} k!
    mpz_class rho0; // rho_r(0) = (prod_{k=0}^{r-1} k!)^2 * r!

    static NormalizationContext for_order(int r) {
        if (r < 1)
            throw std::domain_error("NormalizationContext: order r must be >= 1");
        NormalizationContext ctx;
        ctx.r = r;
        ctx.b_r = 1;
        for (int k = 0; k <= r; ++k)
            ctx.b_r *= exact::factorial(k);
        ctx.rho0 = exact::rho(r, 0);
        return ctx;
    }
};

// Signed Stirling numbers of the first kind sigma(r, k), k = 1..r, from the
// falling-factorial recurrence sigma(r+1, k) = sigma(r, k-1) - r sigma(r, k).
struct StirlingTable {
    int r = 1;
    std::vector<mpz_class> sigma; // sigma[k-1] holds sigma(r, k)

    static StirlingTable build(int r) {
        if (r < 1)
            throw std::domain_error("StirlingTable: order r must be >= 1");
        std::vector<mpz_class> cur{1}; // r = 1: sigma(1,1) = 1
        for (int m = 1; m < r; ++m) {
            std::vector<mpz_class> next(m + 1);
            for (int k = 1; k <= m + 1; ++k) {
                mpz_class v = (k >= 2) ? cur[k - 2] : mpz_class(0);
                if (k <= m)
                    v -= m * cur[k - 1];
                next[k - 1] = v;
            }
            cur = std::move(next);
        }
        return StirlingTable{r, std::move(cur)};
    }
};

// Truncated expansion of a state over |r>, |r+1>, ...; coefficients[n]
// multiplies |n+r>.  truncation_tail bounds the squared norm of the dropped
// part, so sum |c_n|^2 = 1 within truncation_tail plus rounding.
struct FockExpansion {
    int r = 1;
    std::vector<complex> coefficients;
    double truncation_tail = 0.0;
};

namespace detail {

// Lower parameter list of the normalization series: [1, 2,2, ..., r,r, r+1].
// With it, 0F(2r) has term x^n * rho_r(0) / rho_r(n) at index n.
inline std::vector<int> normalization_lower(int r) {
    std::vector<int> lower;
    lower.reserve(2 * r);
    lower.push_back(1);
    for (int k = 2; k <= r; ++k) {
        lower.push_back(k);
        lower.push_back(k);
    }
    lower.push_back(r + 1);
    return lower;
}

inline void check_order(int r) {
    if (r < 1)
        throw std::domain_error("fockstate: order r must be >= 1");
}

} // namespace detail

// N_r(x) = sum_n x^n / rho_r(n), evaluated through the 0F(2r) form.
inline double normalization_N(int r, double x) {
    detail::check_order(r);
    if (!(x >= 0.0))
        throw std::domain_error("normalization_N: negative or non-finite argument");
    const double rho0 = exact::rho(r, 0).get_d();
    return specfun::eval_0Fq<double>({detail::normalization_lower(r), x}) / rho0;
}

// Same series at a complex argument; this is the unnormalized overlap kernel
// N_r(conj(z) z').
inline complex normalization_kernel(int r, complex y) {
    detail::check_order(r);
    const double rho0 = exact::rho(r, 0).get_d();
    return specfun::eval_0Fq<complex>({detail::normalization_lower(r), y}) / rho0;
}

// Builds the normalized truncated expansion of |z>_r.  Coefficients follow
// c_{n+1} = c_n * z / (prod_{k=0}^{r-1}(n+1+k) * sqrt(n+1+r)); truncation
// stops once at least 16 coefficients are kept and a geometric bound on the
// dropped squared norm is below tail_tol.
inline FockExpansion build_state(int r, complex z, double tail_tol) {
    detail::check_order(r);
    if (!(tail_tol > 0.0) || tail_tol > 1e-6)
        throw std::invalid_argument("build_state: tail_tol must lie in (0, 1e-6]");

    const double x = std::norm(z);
    const double N = normalization_N(r, x);
    const double rho0 = exact::rho(r, 0).get_d();

    FockExpansion state;
    state.r = r;
    complex cur = 1.0 / std::sqrt(N * rho0);
    state.coefficients.push_back(cur);

    // Squared-coefficient ratio from index n to n+1.
    auto step_ratio = [&](long n) {
        double fac = 1.0;
        for (int k = 0; k < r; ++k)
            fac *= static_cast<double>(n + 1 + k);
        return x / (fac * fac * static_cast<double>(n + 1 + r));
    };

    for (std::size_t n = 0; n < specfun::kTermCap; ++n) {
        double fac = 1.0;
        for (int k = 0; k < r; ++k)
            fac *= static_cast<double>(n + 1 + k);
        cur *= z / (fac * std::sqrt(static_cast<double>(n + 1 + r)));
        state.coefficients.push_back(cur);

        const double q = step_ratio(static_cast<long>(n) + 1);
        if (state.coefficients.size() >= 16 && q < 0.5) {
            const double bound = std::norm(cur) * q / (1.0 - q);
            if (bound <= tail_tol) {
                state.truncation_tail = bound;
                return state;
            }
        }
    }
    throw convergence_error("build_state: coefficient cap reached", specfun::kTermCap);
}

// Normalized overlap <z|z'>_r = N_r(conj(z) z') / sqrt(N_r(|z|^2) N_r(|z'|^2)).
// The unnormalized kernel is available separately as normalization_kernel.
inline complex overlap(int r, complex z, complex zp) {
    detail::check_order(r);
    const double nz = normalization_N(r, std::norm(z));
    const double nzp = normalization_N(r, std::norm(zp));
    return normalization_kernel(r, std::conj(z) * zp) / std::sqrt(nz * nzp);
}

// Applies (a+)^r a^(r+1) coefficient-wise:
// |n+r> -> ((n-1+r)!/(n-1)!) sqrt(n+r) |n+r-1>, with the n = 0 component
// annihilated.  The result is again supported on |r>, |r+1>, ... and is
// returned unnormalized (it equals z |z>_r for an exact eigenstate).
inline FockExpansion apply_generalized_lowering(const FockExpansion& state) {
    detail::check_order(state.r);
    FockExpansion out;
    out.r = state.r;
    out.truncation_tail = state.truncation_tail;
    if (state.coefficients.size() <= 1)
        return out;
    out.coefficients.resize(state.coefficients.size() - 1);
    for (std::size_t m = 0; m + 1 < state.coefficients.size(); ++m) {
        double fac = 1.0;
        for (int j = 1; j <= state.r; ++j)
            fac *= static_cast<double>(m + j);
        out.coefficients[m] =
            state.coefficients[m + 1] * fac * std::sqrt(static_cast<double>(m + 1 + state.r));
    }
    return out;
}

// || (a+)^r a^(r+1) |z>_r - z |z>_r || over the truncated expansion, skipping
// the top max(2, r) coefficient slots where truncation garbage lives.
inline double eigen_residual(int r, complex z, double tail_tol) {
    detail::check_order(r);
    if (!(tail_tol > 0.0) || tail_tol > 1e-10)
        throw std::invalid_argument("eigen_residual: tail_tol must lie in (0, 1e-10]");

    const FockExpansion state = build_state(r, z, tail_tol);
    const FockExpansion low = apply_generalized_lowering(state);

    const std::size_t band = static_cast<std::size_t>(std::max(2, r));
    if (state.coefficients.size() <= band + 1)
        throw std::invalid_argument("eigen_residual: expansion shorter than the excluded band");
    const std::size_t upto = state.coefficients.size() - 1 - band; // inclusive
    double sum = 0.0;
    for (std::size_t m = 0; m <= upto && m < low.coefficients.size(); ++m)
        sum += std::norm(low.coefficients[m] - z * state.coefficients[m]);
    return std::sqrt(sum);
}

// f_r(m) = sum_{k=1}^{r} sigma(r, k) (m-1)^k, exactly.  Equals the product
// (m-1)(m-2)...(m-r); the lowering operator acts as a f_r(n) on the family.
inline mpz_class stirling_f(int r, long m) {
    const StirlingTable table = StirlingTable::build(r);
    const mpz_class base = m - 1;
    mpz_class sum = 0;
    mpz_class power = 1;
    for (int k = 1; k <= r; ++k) {
        power *= base;
        sum += table.sigma[k - 1] * power;
    }
    return sum;
}

// Free evolution under H = a+ a + 1/2: coefficient n picks up the phase
// exp(-i (n + r + 1/2) t).  Moduli, and hence the norm, are unchanged.
inline FockExpansion time_evolve(const FockExpansion& state, double t) {
    FockExpansion out = state;
    for (std::size_t n = 0; n < out.coefficients.size(); ++n) {
        const double phase = -(static_cast<double>(n) + state.r + 0.5) * t;
        out.coefficients[n] *= std::polar(1.0, phase);
    }
    return out;
}

} // namespace hbcs::fockstate
