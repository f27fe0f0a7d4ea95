#pragma once

// Photon statistics of |z>_r: the number distribution P_r(k, x), factorial
// and ordinary moments, the general normally-ordered expectation
// <(a+)^p a^s>, the Mandel parameter in its logarithmic-derivative form, the
// metric factor omega = d/dx [x N'/N], and the quadrature variances.
// Everything reduces to weighted sums over w_n = x^n / rho_r(n).

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "hbcs/errors.hpp"
#include "hbcs/exactint.hpp"
#include "hbcs/fockstate.hpp"
#include "hbcs/specfun.hpp"
#include "hbcs/summation.hpp"

namespace hbcs::statistics {

using complex = std::complex<double>;

struct StatisticsReport {
    int r = 1;
    double x = 0.0; // |z|^2
    double mean_n = 0.0;
    double mean_n2 = 0.0;
    double mandel_q = 0.0;
    double metric_omega = 0.0;
    double var_x = 0.0;
    double var_p = 0.0;
};

struct QuadratureVariances {
    double var_x = 0.0;
    double var_p = 0.0;
};

namespace detail {

inline void check_order(int r) {
    if (r < 1)
        throw std::domain_error("statistics: order r must be >= 1");
}

inline double ln_rho(int r, long n) {
    double s = 0.0;
    for (int k = 0; k < r; ++k)
        s += 2.0 * std::lgamma(static_cast<double>(n + k + 1));
    return s + std::lgamma(static_cast<double>(n + r + 1));
}

// sum_n g(n) x^n / rho_r(n) with the series stopping rule.  The weights are
// positive and decay super-factorially, so the polynomial factors g cannot
// disturb termination.
template <class G>
double weighted_sum(int r, double x, G g) {
    const double w0 = 1.0 / exact::rho(r, 0).get_d();
    if (x == 0.0)
        return g(0L) * w0;

    accumulator<double> acc;
    double w = w0;
    int streak = 0;
    for (std::size_t n = 0; n < specfun::kTermCap; ++n) {
        const double t = g(static_cast<long>(n)) * w;
        acc.add(t);
        const double total = std::fabs(acc.value());
        if (total > 0.0 && std::fabs(t) <= specfun::kTermStopRel * total) {
            if (++streak >= 2)
                return acc.value();
        } else {
            streak = 0;
        }
        double fac = 1.0;
        for (int k = 0; k < r; ++k)
            fac *= static_cast<double>(n + 1 + k);
        w *= x / (fac * fac * static_cast<double>(n + 1 + r));
    }
    throw convergence_error("weighted_sum: term cap reached", specfun::kTermCap);
}

// omega = d/dx [x S1/S0] for a positive power series with a_{n+1}/a_n given
// by ratio(n); shared with the exp-series wiring test, where it must give 1.
template <class RatioFn>
double omega_from_series(double x, RatioFn ratio) {
    if (!(x >= 0.0))
        throw std::domain_error("omega_from_series: negative or non-finite argument");
    if (x == 0.0)
        return ratio(0L); // a_1 / a_0, the series limit at the origin

    accumulator<double> s0, s1, s2;
    double a = 1.0; // overall scale of a_0 cancels
    int streak = 0;
    for (std::size_t n = 0; n < specfun::kTermCap; ++n) {
        const double nd = static_cast<double>(n);
        s0.add(a);
        s1.add(nd * a);
        s2.add(nd * nd * a);
        if (n >= 2 && nd * nd * a <= specfun::kTermStopRel * s2.value()) {
            if (++streak >= 2) {
                const double v0 = s0.value(), v1 = s1.value(), v2 = s2.value();
                return (v2 * v0 - v1 * v1) / (x * v0 * v0);
            }
        } else {
            streak = 0;
        }
        a *= x * ratio(static_cast<long>(n));
    }
    throw convergence_error("omega_from_series: term cap reached", specfun::kTermCap);
}

} // namespace detail

// P_r(k, x) = x^(k-r) / (N_r(x) rho_r(k-r)) for k >= r; the state has no
// support below |r>.
inline double probability_P(int r, int k, double x) {
    detail::check_order(r);
    if (k < r)
        throw std::domain_error("probability_P: no support below the base level r");
    if (!(x >= 0.0))
        throw std::domain_error("probability_P: negative or non-finite argument");
    const long n = k - r;
    if (x == 0.0)
        return n == 0 ? 1.0 : 0.0;
    const double N = fockstate::normalization_N(r, x);
    return std::exp(n * std::log(x) - detail::ln_rho(r, n)) / N;
}

// <(a+)^p a^p> = x^(p-r)/N * d^p/dx^p [x^r N(x)], taken term by term; the
// n-th term carries the falling factorial (n+r)(n+r-1)...(n+r-p+1).
inline double expectation_pp(int r, double x, int p) {
    detail::check_order(r);
    if (p < 0)
        throw std::domain_error("expectation_pp: negative operator power");
    if (!(x >= 0.0))
        throw std::domain_error("expectation_pp: negative or non-finite argument");
    const double num = detail::weighted_sum(r, x, [&](long n) {
        double f = 1.0;
        for (int j = 0; j < p; ++j)
            f *= static_cast<double>(n + r - j);
        return (n + r >= p) ? f : 0.0;
    });
    const double den = detail::weighted_sum(r, x, [](long) { return 1.0; });
    return num / den;
}

inline double mean_photon_number(int r, double x) { return expectation_pp(r, x, 1); }

// <n^p> as a direct weighted Fock sum; used as the independent route against
// the derivative forms.
inline double moments_np(int r, double x, int p) {
    detail::check_order(r);
    if (p < 0)
        throw std::domain_error("moments_np: negative moment order");
    const double num = detail::weighted_sum(
        r, x, [&](long n) { return std::pow(static_cast<double>(n + r), p); });
    const double den = detail::weighted_sum(r, x, [](long) { return 1.0; });
    return num / den;
}

// <(a+)^p a^s>.  Matching Fock components forces the single sum
// N^-1 sum_n conj(z)^(n+p-s) z^n sqrt((n+r)! (n+p-s+r)!) /
//            (sqrt(rho(n) rho(n+p-s)) (n+r-s)!),
// which splits into a constant complex prefactor times a real series in
// |z|^2.  For p = s it coincides with expectation_pp at x = |z|^2.
inline complex expectation_ps(int r, complex z, int p, int s) {
    detail::check_order(r);
    if (p < 0 || s < 0)
        throw std::domain_error("expectation_ps: negative operator power");

    const int d = p - s;
    const long n0 = std::max({0L, static_cast<long>(s - p), static_cast<long>(s - r)});
    const double x = std::norm(z);

    complex prefactor = 1.0;
    const complex zb = std::conj(z);
    for (int j = 0; j < d; ++j)
        prefactor *= zb;
    for (int j = 0; j < -d; ++j)
        prefactor *= z;

    accumulator<double> acc;
    // |z|^(2 e_n) with e_n = n for p >= s, n + d otherwise.
    double xpow = 1.0;
    {
        const long e0 = (d >= 0) ? n0 : n0 + d;
        for (long j = 0; j < e0; ++j)
            xpow *= x;
    }
    int streak = 0;
    bool converged = false;
    for (long n = n0; n < static_cast<long>(specfun::kTermCap); ++n) {
        const double lg =
            0.5 * (std::lgamma(static_cast<double>(n + r + 1)) +
                   std::lgamma(static_cast<double>(n + d + r + 1)) - detail::ln_rho(r, n) -
                   detail::ln_rho(r, n + d)) -
            std::lgamma(static_cast<double>(n + r - s + 1));
        const double t = xpow * std::exp(lg);
        acc.add(t);
        const double total = std::fabs(acc.value());
        if (total > 0.0 && std::fabs(t) <= specfun::kTermStopRel * total) {
            if (++streak >= 2) {
                converged = true;
                break;
            }
        } else {
            streak = 0;
        }
        if (x == 0.0 && n >= n0 + 1) {
            converged = true; // only the e_n = 0 term can contribute
            break;
        }
        xpow *= x;
    }
    if (!converged)
        throw convergence_error("expectation_ps: term cap reached", specfun::kTermCap);

    const double N = fockstate::normalization_N(r, x);
    return prefactor * acc.value() / N;
}

// Mandel Q in the logarithmic-derivative form x [G''/G' - G'/G] with
// G = x^r N(x).  Factoring out powers of x leaves ratios of weighted sums
// that stay finite at x = 0, where the value is the series limit -1.
inline double mandel_Q(int r, double x) {
    detail::check_order(r);
    if (!(x >= 0.0))
        throw std::domain_error("mandel_Q: negative or non-finite argument");
    const double s0 = detail::weighted_sum(r, x, [](long) { return 1.0; });
    const double sa =
        detail::weighted_sum(r, x, [&](long n) { return static_cast<double>(n + r); });
    const double sb = detail::weighted_sum(r, x, [&](long n) {
        return static_cast<double>(n + r) * static_cast<double>(n + r - 1);
    });
    return sb / sa - sa / s0;
}

// omega = d/dx [x N'(x)/N(x)]; equals 1 identically when N is replaced by
// the exponential series of the standard coherent states.
inline double metric_omega(int r, double x) {
    detail::check_order(r);
    return detail::omega_from_series(x, [&](long n) {
        double fac = 1.0;
        for (int k = 0; k < r; ++k)
            fac *= static_cast<double>(n + 1 + k);
        return 1.0 / (fac * fac * static_cast<double>(n + 1 + r));
    });
}

// Same metric factor with the exponential series of the standard coherent
// states in place of N; identically 1, kept as a wiring check of the
// series machinery.
inline double standard_cs_omega(double x) {
    return detail::omega_from_series(
        x, [](long n) { return 1.0 / static_cast<double>(n + 1); });
}

// Variances of X = (a + a+)/sqrt(2) and P = -i (a - a+)/sqrt(2):
//   (dX)^2 = 1/2 (1 + 2<a+a> + <a^2> + <a+^2> - <a>^2 - <a+>^2 - 2<a><a+>)
//   (dP)^2 = 1/2 (1 + 2<a+a> - <a^2> - <a+^2> + <a>^2 + <a+>^2 - 2<a><a+>)
// Every bracketed combination is real by conjugation symmetry.
inline QuadratureVariances quadrature_variances(int r, complex z) {
    detail::check_order(r);
    const complex ea = expectation_ps(r, z, 0, 1);
    const complex ead = expectation_ps(r, z, 1, 0);
    const complex eaa = expectation_ps(r, z, 0, 2);
    const complex eadad = expectation_ps(r, z, 2, 0);
    const double en = expectation_ps(r, z, 1, 1).real();

    const double pair_sum = (eaa + eadad).real();
    const double mean_sq = (ea * ea + ead * ead).real();
    const double cross = 2.0 * (ea * ead).real();

    QuadratureVariances v;
    v.var_x = 0.5 * (1.0 + 2.0 * en + pair_sum - mean_sq - cross);
    v.var_p = 0.5 * (1.0 + 2.0 * en - pair_sum + mean_sq - cross);
    return v;
}

// Poisson reference of the standard coherent states, P(k) = e^-x x^k / k!.
inline double standard_cs_probability(int k, double x) {
    if (k < 0)
        throw std::domain_error("standard_cs_probability: negative index");
    if (!(x >= 0.0))
        throw std::domain_error("standard_cs_probability: negative or non-finite argument");
    if (x == 0.0)
        return k == 0 ? 1.0 : 0.0;
    return std::exp(-x + k * std::log(x) - std::lgamma(static_cast<double>(k + 1)));
}

inline StatisticsReport compute_statistics(int r, complex z) {
    StatisticsReport rep;
    rep.r = r;
    rep.x = std::norm(z);
    rep.mean_n = expectation_pp(r, rep.x, 1);
    rep.mean_n2 = expectation_pp(r, rep.x, 2) + rep.mean_n;
    rep.mandel_q = mandel_Q(r, rep.x);
    rep.metric_omega = metric_omega(r, rep.x);
    const QuadratureVariances v = quadrature_variances(r, z);
    rep.var_x = v.var_x;
    rep.var_p = v.var_p;
    return rep;
}

} // namespace hbcs::statistics
