#pragma once

// The Stieltjes moment side of the family: exact moments
// rho_r(n) = [prod (n+k)!]^2 (n+r)!, the positive weight W_r(x) recovered
// from the inverse Mellin transform of rho_r(s-1) by trapezoidal quadrature
// on a vertical line, numerical verification that W_r reproduces the
// moments, and the two non-uniqueness diagnostics (Carleman sum and
// log-convexity of -ln W_r(e^u)).

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hbcs/errors.hpp"
#include "hbcs/exactint.hpp"
#include "hbcs/specfun.hpp"
#include "hbcs/summation.hpp"

namespace hbcs::momentproblem {

using exact::rho;

// The first `count` exact moments of order r.
struct MomentSequence {
    int r = 1;
    std::vector<mpz_class> values;

    static MomentSequence first(int r, int count) {
        if (count < 1)
            throw std::invalid_argument("MomentSequence: count must be >= 1");
        MomentSequence seq;
        seq.r = r;
        seq.values.reserve(count);
        for (int n = 0; n < count; ++n)
            seq.values.push_back(rho(r, n));
        return seq;
    }
};

// One Gamma factor Gamma(s + shift)^multiplicity of the Mellin image.
struct GammaFactor {
    int shift = 0;
    int multiplicity = 1;
};

// Product of Gamma factors on a vertical integration line Re s = contour_re.
// im_cutoff (T) and step (h) equal to zero request automatic choices: T is
// pushed until the integrand magnitude falls below 1e-18 of its t = 0 value,
// and h resolves the x^(-it) oscillation with a wide safety margin.
struct MellinBarnesSpec {
    std::vector<GammaFactor> gamma_shifts;
    double contour_re = 0.5;
    double im_cutoff = 0.0;
    double step = 0.0;

    // Canonical family of order r: shifts {0, ..., r-1} twice, {r} once.
    static MellinBarnesSpec for_order(int r, double contour_re = 0.5, double im_cutoff = 0.0,
                                      double step = 0.0) {
        if (r < 1)
            throw std::invalid_argument("MellinBarnesSpec: order r must be >= 1");
        MellinBarnesSpec spec;
        for (int k = 0; k < r; ++k)
            spec.gamma_shifts.push_back({k, 2});
        spec.gamma_shifts.push_back({r, 1});
        spec.contour_re = contour_re;
        spec.im_cutoff = im_cutoff;
        spec.step = step;
        return spec;
    }
};

namespace detail {

inline constexpr double kLogTailTarget = -41.446531673892822; // ln(1e-18)
inline constexpr double kWeightTailTol = 1e-9;

inline void validate(const MellinBarnesSpec& spec) {
    if (spec.gamma_shifts.empty())
        throw std::invalid_argument("MellinBarnesSpec: empty Gamma factor list");
    for (const auto& g : spec.gamma_shifts) {
        if (g.shift < 0 || g.multiplicity < 1)
            throw std::invalid_argument("MellinBarnesSpec: invalid Gamma factor");
    }
    if (!(spec.contour_re > 0.0))
        throw std::invalid_argument("MellinBarnesSpec: contour must satisfy Re s > 0");
    if (spec.im_cutoff < 0.0 || spec.step < 0.0)
        throw std::invalid_argument("MellinBarnesSpec: negative quadrature parameter");
}

inline int gamma_count(const MellinBarnesSpec& spec) {
    int m = 0;
    for (const auto& g : spec.gamma_shifts)
        m += g.multiplicity;
    return m;
}

inline int shift_sum(const MellinBarnesSpec& spec) {
    int a = 0;
    for (const auto& g : spec.gamma_shifts)
        a += g.multiplicity * g.shift;
    return a;
}

// log of the integrand rho(s-1) x^(-s) at s = c + it.
inline std::complex<double> log_integrand(const MellinBarnesSpec& spec, double c, double lx,
                                          double t) {
    std::complex<double> L = 0.0;
    const std::complex<double> it(0.0, t);
    for (const auto& g : spec.gamma_shifts)
        L += static_cast<double>(g.multiplicity) *
             specfun::log_gamma(std::complex<double>(c + g.shift, 0.0) + it);
    L -= (std::complex<double>(c, 0.0) + it) * lx;
    return L;
}

// Trapezoidal inverse Mellin transform on the line Re s = c.  The integrand
// is conjugate-symmetric in t, so only t >= 0 is summed and the real part
// doubled.  Exponentials are taken on the combined log to dodge intermediate
// overflow of the Gamma product against x^(-c).
inline double weight_on_line(const MellinBarnesSpec& spec, double c, double x) {
    if (!(x > 0.0))
        throw std::domain_error("weight_W: argument must be positive");

    const double lx = std::log(x);
    const int m = gamma_count(spec);
    const double L0 = log_integrand(spec, c, lx, 0.0).real();

    double T = spec.im_cutoff;
    if (T == 0.0) {
        double t = 1.0;
        while (t < 400.0 && log_integrand(spec, c, lx, t).real() - L0 > kLogTailTarget)
            t += 1.0;
        T = t;
    }
    const double h = (spec.step > 0.0) ? spec.step : 2.0 * M_PI / (std::fabs(lx) + 100.0);

    const long K = static_cast<long>(std::ceil(T / h));
    compensated_sum sum;
    sum.add(0.5 * std::exp(L0 - L0)); // f(0)/2, scaled by exp(-L0)
    for (long k = 1; k <= K; ++k)
        sum.add(std::exp(log_integrand(spec, c, lx, k * h) - L0).real());
    const double W = sum.value() * std::exp(L0) * h / M_PI;

    // Truncation estimate from the asymptotic decay rate m pi / 2 of the
    // Gamma product along the line.
    const double tail_abs =
        std::exp(log_integrand(spec, c, lx, K * h).real()) / (M_PI * 0.5 * m * M_PI);
    if (!(W > 0.0))
        throw accuracy_error("weight_W: quadrature lost positivity", tail_abs);
    if (tail_abs > kWeightTailTol * W)
        throw accuracy_error("weight_W: contour truncation estimate above tolerance",
                             tail_abs / W);
    return W;
}

} // namespace detail

// W_r(x) = (1/2 pi) Integral rho_r(c - 1 + i t) x^(-(c + i t)) dt on the
// spec's contour.  Strictly positive on (0, inf); grows like a multiple of
// ln(1/x) toward x = 0 and decays like exp(-m x^(1/m)) for large x.
inline double weight_W(const MellinBarnesSpec& spec, double x) {
    detail::validate(spec);
    return detail::weight_on_line(spec, spec.contour_re, x);
}

// Quadrature layout for moment reconstruction integrals.  Zeros mean
// automatic choices derived from the decay model of the integrand.
struct MomentQuadConfig {
    double x_min = 0.0;          // lower end of the x grid
    double x_max = 0.0;          // upper end (auto: from n_max and the decay law)
    double step = 0.05;          // grid step in ln x
    int n_max = 8;               // largest moment the grid must support
    double tail_tolerance = 1e-6; // relative tail bound that triggers an error
};

struct MomentCheck {
    double integral = 0.0;
    double moment = 0.0;    // exact rho as double
    double rel_error = 0.0;
    double tail_bound = 0.0; // relative to the exact moment, reported not added
};

// Shared-grid evaluator for Integral x^n W_r(x) dx, n = 0..n_max.  The weight
// values are computed once on a grid uniform in v = ln x and reused for every
// n.  Inside the integral the weight is evaluated on the contour through
// Re s = max(c, x^(1/m)): the vertical line near the saddle point of
// rho(s-1) x^(-s).  On the fixed default line the integrand's oscillatory
// cancellation at large x grows like exp(m x^(1/m)) and double precision
// cannot reach the 1e-6 target at n = 8; through the saddle the integrand is
// positive-phase at t = 0 and the weight keeps full relative accuracy.  The
// weight function itself is contour-independent, so this is an evaluation
// detail, not a change of the object being integrated.
class MomentVerifier {
public:
    MomentVerifier(const MellinBarnesSpec& spec, const MomentQuadConfig& cfg = {})
        : spec_(spec), cfg_(cfg) {
        detail::validate(spec);
        if (cfg_.n_max < 0 || cfg_.n_max > 12)
            throw std::invalid_argument("MomentVerifier: n_max out of the supported window");
        if (!(cfg_.step > 0.0))
            throw std::invalid_argument("MomentVerifier: step must be positive");

        const int m = detail::gamma_count(spec_);
        const double A = detail::shift_sum(spec_);
        const double theta = A / m - 0.5 + 0.5 / m;

        double x_max = cfg_.x_max;
        if (x_max == 0.0) {
            // Largest x that still matters: the integrand in y = x^(1/m) is
            // y^K exp(-m y) up to slow factors, with K below.  Push to where
            // the incomplete-gamma tail is ~1e-11 of the peak mass.
            const double K = m * (cfg_.n_max + theta) + m - 1.0;
            double lo = 1.0, hi = 100.0;
            for (int i = 0; i < 200; ++i) {
                const double mid = 0.5 * (lo + hi);
                (K * (mid - 1.0 - std::log(mid)) > 26.0 ? hi : lo) = mid;
            }
            const double y0 = K * hi / m;
            x_max = std::pow(y0, m);
        }
        const double x_min = (cfg_.x_min > 0.0) ? cfg_.x_min : std::exp(-23.0);
        if (!(x_max > x_min))
            throw std::invalid_argument("MomentVerifier: empty integration window");

        const double v_lo = std::log(x_min);
        const long count = static_cast<long>(std::ceil((std::log(x_max) - v_lo) / cfg_.step)) + 1;
        v_.reserve(count);
        w_.reserve(count);
        for (long i = 0; i < count; ++i) {
            const double v = v_lo + i * cfg_.step;
            const double x = std::exp(v);
            const double c = std::max(spec_.contour_re, std::pow(x, 1.0 / m));
            v_.push_back(v);
            w_.push_back(detail::weight_on_line(spec_, c, x));
        }
    }

    MomentCheck moment(int n) const {
        if (n < 0 || n > cfg_.n_max)
            throw std::invalid_argument("MomentVerifier: moment index outside the grid's window");

        // Trapezoid in v = ln x of g(v) = exp(v (n+1)) W(e^v).
        const double h = cfg_.step;
        compensated_sum acc;
        std::vector<double> g(v_.size());
        for (std::size_t i = 0; i < v_.size(); ++i)
            g[i] = std::exp(v_[i] * (n + 1)) * w_[i];
        acc.add(0.5 * g.front());
        for (std::size_t i = 1; i + 1 < g.size(); ++i)
            acc.add(g[i]);
        acc.add(0.5 * g.back());

        MomentCheck check;
        check.integral = acc.value() * h;
        check.moment = moment_exact(n);

        // Small-x side: W grows only logarithmically, so the missing piece is
        // bounded by a fixed multiple of the endpoint value over (n+1).
        const double tail_lo = 2.0 * g.front() / (n + 1);
        // Large-x side: geometric domination from the measured log-slope of g
        // at the last two grid points (the true decay keeps steepening).
        double tail_hi = 0.0;
        const double g1 = g[g.size() - 2], g2 = g.back();
        if (g2 > 0.0 && g1 > 0.0) {
            const double kappa = (std::log(g2) - std::log(g1)) / h;
            if (!(kappa < 0.0))
                throw accuracy_error("MomentVerifier: integrand not yet decaying at x_max",
                                     kappa);
            tail_hi = 2.0 * g2 / -kappa;
        }
        check.tail_bound = (tail_lo + tail_hi) / check.moment;
        check.rel_error = std::fabs(check.integral - check.moment) / check.moment;
        if (check.tail_bound > cfg_.tail_tolerance)
            throw accuracy_error("MomentVerifier: tail bound above tolerance", check.tail_bound);
        return check;
    }

    double moment_exact(int n) const {
        mpz_class p = 1;
        for (const auto& gf : spec_.gamma_shifts) {
            const mpz_class f = exact::factorial(n + gf.shift);
            for (int j = 0; j < gf.multiplicity; ++j)
                p *= f;
        }
        return p.get_d();
    }

private:
    MellinBarnesSpec spec_;
    MomentQuadConfig cfg_;
    std::vector<double> v_, w_;
};

// | Integral x^n W dx  -  rho(n) | / rho(n) for a single n.
inline double verify_moment(const MellinBarnesSpec& spec, int n, MomentQuadConfig cfg = {}) {
    cfg.n_max = std::max(n, 0);
    return MomentVerifier(spec, cfg).moment(n).rel_error;
}

struct CarlemanResult {
    double partial_sum = 0.0;
    double tail_bound = 0.0;
    double fitted_exponent = 0.0; // terms behave like n^(-exponent), ~ (2r+1)/2
    bool converges = false;
};

// Carleman sum S_r = sum_{n>=1} rho_r(n)^(-1/(2n)).  Convergence (the terms
// decay like n^(-(2r+1)/2), an exponent above 1) is what permits moment
// non-uniqueness; the exponent is fitted on the last decade of terms.
inline CarlemanResult carleman_sum(int r, int n_max) {
    if (r < 1)
        throw std::invalid_argument("carleman_sum: order r must be >= 1");
    if (n_max < 10)
        throw std::invalid_argument("carleman_sum: n_max must be >= 10");

    auto ln_rho = [&](long n) {
        double s = 0.0;
        for (int k = 0; k < r; ++k)
            s += 2.0 * std::lgamma(static_cast<double>(n + k + 1));
        return s + std::lgamma(static_cast<double>(n + r + 1));
    };

    compensated_sum sum;
    std::vector<double> ln_n, ln_t;
    const int fit_from = std::max(2, n_max / 10);
    for (long n = 1; n <= n_max; ++n) {
        const double lt = -ln_rho(n) / (2.0 * n);
        sum.add(std::exp(lt));
        if (n >= fit_from) {
            ln_n.push_back(std::log(static_cast<double>(n)));
            ln_t.push_back(lt);
        }
    }

    // Least-squares slope of ln(term) against ln(n).
    const std::size_t count = ln_n.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        mx += ln_n[i];
        my += ln_t[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        sxx += (ln_n[i] - mx) * (ln_n[i] - mx);
        sxy += (ln_n[i] - mx) * (ln_t[i] - my);
    }
    const double exponent = -sxy / sxx;

    CarlemanResult res;
    res.partial_sum = sum.value();
    res.fitted_exponent = exponent;
    res.converges = exponent > 1.1;
    res.tail_bound = res.converges
                         ? 1.5 * std::exp(-ln_rho(n_max) / (2.0 * n_max)) * n_max / (exponent - 1.0)
                         : std::numeric_limits<double>::infinity();
    return res;
}

// Minimum central second difference of psi(u) = -ln W_r(e^u) over a uniform
// grid in u = ln x.  A non-negative result (up to rounding) is the convexity
// half of the non-uniqueness criterion.
inline double log_convexity_check(int r, const std::vector<double>& u_grid) {
    if (u_grid.size() < 3)
        throw std::invalid_argument("log_convexity_check: need at least 3 grid points");
    const double h = u_grid[1] - u_grid[0];
    if (!(h > 0.0))
        throw std::invalid_argument("log_convexity_check: grid must be increasing");
    for (std::size_t i = 1; i + 1 < u_grid.size(); ++i)
        if (std::fabs((u_grid[i + 1] - u_grid[i]) - h) > 1e-9 * std::max(1.0, std::fabs(h)))
            throw std::invalid_argument("log_convexity_check: grid must be uniform");

    const MellinBarnesSpec spec = MellinBarnesSpec::for_order(r);
    std::vector<double> psi(u_grid.size());
    for (std::size_t i = 0; i < u_grid.size(); ++i)
        psi[i] = -std::log(weight_W(spec, std::exp(u_grid[i])));

    double min_dd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < psi.size(); ++i)
        min_dd = std::min(min_dd, (psi[i - 1] - 2.0 * psi[i] + psi[i + 1]) / (h * h));
    return min_dd;
}

} // namespace hbcs::momentproblem
