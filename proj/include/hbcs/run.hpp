#pragma once

// Front-end plumbing shared by the CLI: figure data regeneration as CSV and
// the named verification suites with one report line per check.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hbcs/eigenfun.hpp"
#include "hbcs/errors.hpp"
#include "hbcs/fockstate.hpp"
#include "hbcs/momentproblem.hpp"
#include "hbcs/specfun.hpp"
#include "hbcs/statistics.hpp"

namespace hbcs::run {

struct RunConfig {
    enum class Command { figure, verify };

    Command command = Command::figure;
    int figure_id = 1;
    std::string suite = "all";
    std::vector<int> r_values = {1, 2, 3};
    // Grid window; NaN or 0 steps pick the per-figure defaults.
    double x_min = std::numeric_limits<double>::quiet_NaN();
    double x_max = std::numeric_limits<double>::quiet_NaN();
    int steps = 0;
    double tail_tol = 1e-12;
    // Contour quadrature overrides (0 keeps automatic choices).
    double contour_re = 0.5;
    double im_cutoff = 0.0;
    double quad_step = 0.0;
    double x_max_integration = 0.0;
    std::string output_path;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Evaluate rows by a small worker pool; rows land at their grid index, so the
// assembled document does not depend on scheduling.
inline std::vector<std::string> rows_in_order(long count,
                                              const std::function<std::string(long)>& fn) {
    std::vector<std::string> rows(count);
    const unsigned workers =
        std::clamp(std::thread::hardware_concurrency(), 1u, 8u);
    if (workers == 1 || count < 64) {
        for (long i = 0; i < count; ++i)
            rows[i] = fn(i);
        return rows;
    }
    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (long i = next++; i < count; i = next++)
                    rows[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next = count;
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
    return rows;
}

inline void validate(const RunConfig& cfg) {
    if (cfg.figure_id < 1 || cfg.figure_id > 9)
        throw std::invalid_argument("figure id must be in 1..9");
    if (cfg.r_values.empty())
        throw std::invalid_argument("r list must not be empty");
    for (int r : cfg.r_values)
        if (r < 1)
            throw std::invalid_argument("r values must be positive");
    if (cfg.steps != 0 && cfg.steps < 2)
        throw std::invalid_argument("steps must be >= 2");
    if (!std::isnan(cfg.x_min) && !std::isnan(cfg.x_max) && !(cfg.x_min < cfg.x_max))
        throw std::invalid_argument("window requires x_min < x_max");
}

} // namespace detail

// CSV behind one of the nine figures.  Defaults: figs 1-7 sweep
// x in [0.001, 20] with 400 points (fig 1 log-spaced, the rest linear);
// figs 8 and 9 sweep z over a steps x steps grid on [-3,3]^2.
inline std::string run_figure(const RunConfig& cfg) {
    detail::validate(cfg);
    const int id = cfg.figure_id;
    const bool planar = (id >= 8);
    const double x_min = std::isnan(cfg.x_min) ? (planar ? -3.0 : 0.001) : cfg.x_min;
    const double x_max = std::isnan(cfg.x_max) ? (planar ? 3.0 : 20.0) : cfg.x_max;
    const int steps = (cfg.steps != 0) ? cfg.steps : (planar ? 61 : 400);
    if (!(x_min < x_max))
        throw std::invalid_argument("window requires x_min < x_max");
    const bool log_grid = (id == 1);
    if (log_grid && !(x_min > 0.0))
        throw std::invalid_argument("fig 1 needs x_min > 0 (log-spaced grid)");

    const auto& rs = cfg.r_values;
    std::string header = planar ? "re_z,im_z" : "x";
    const char* stem = nullptr;
    switch (id) {
    case 1: stem = "ln_W"; break;
    case 2: case 3: stem = "P"; break;
    case 4: stem = "nbar"; break;
    case 5: stem = "Q"; break;
    case 6: stem = "omega"; break;
    case 7: stem = "varX"; break;
    case 8: stem = "varX"; break;
    case 9: stem = "varP"; break;
    }
    if (planar) {
        header += std::string(",") + stem + "_r" + std::to_string(rs.front());
    } else {
        for (int r : rs)
            header += std::string(",") + stem + "_r" + std::to_string(r);
        if (id == 2 || id == 3)
            header += ",poisson";
    }

    std::vector<momentproblem::MellinBarnesSpec> specs;
    if (id == 1)
        for (int r : rs)
            specs.push_back(momentproblem::MellinBarnesSpec::for_order(
                r, cfg.contour_re, cfg.im_cutoff, cfg.quad_step));

    auto grid_point = [&](long i, double lo, double hi, int n) {
        const double u = static_cast<double>(i) / (n - 1);
        return log_grid ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u;
    };

    std::function<std::string(long)> row;
    if (planar) {
        const int r = rs.front();
        row = [&, r](long idx) {
            const double re = grid_point(idx / steps, x_min, x_max, steps);
            const double im = grid_point(idx % steps, x_min, x_max, steps);
            const auto var = statistics::quadrature_variances(r, {re, im});
            return detail::fmt(re) + "," + detail::fmt(im) + "," +
                   detail::fmt(id == 8 ? var.var_x : var.var_p);
        };
    } else {
        row = [&](long idx) {
            const double x = grid_point(idx, x_min, x_max, steps);
            std::string line = detail::fmt(x);
            for (std::size_t j = 0; j < rs.size(); ++j) {
                const int r = rs[j];
                double v = 0.0;
                switch (id) {
                case 1: v = std::log(momentproblem::weight_W(specs[j], x)); break;
                case 2: v = statistics::probability_P(r, r, x); break;
                case 3: v = statistics::probability_P(r, r + 1, x); break;
                case 4: v = statistics::mean_photon_number(r, x); break;
                case 5: v = statistics::mandel_Q(r, x); break;
                case 6: v = statistics::metric_omega(r, x); break;
                case 7:
                    v = statistics::quadrature_variances(r, {std::sqrt(x), 0.0}).var_x;
                    break;
                }
                line += "," + detail::fmt(v);
            }
            if (id == 2 || id == 3)
                line += "," + detail::fmt(statistics::standard_cs_probability(id - 2, x));
            return line;
        };
    }

    const long count = planar ? static_cast<long>(steps) * steps : steps;
    auto rows = detail::rows_in_order(count, row);
    std::string csv = header + "\n";
    for (const auto& r : rows) {
        csv += r;
        csv += "\n";
    }
    return csv;
}

struct VerifyReport {
    std::string text;
    int checks = 0;
    int failures = 0;
};

namespace detail {

class Reporter {
public:
    // smaller_ok: pass when measured <= threshold; otherwise pass when >=.
    void add(const std::string& name, double measured, double threshold, bool smaller_ok) {
        const bool ok = smaller_ok ? (measured <= threshold) : (measured >= threshold);
        line(name, fmt(measured), fmt(threshold), ok);
    }

    void verdict(const std::string& name, const std::string& measured,
                 const std::string& threshold, bool ok) {
        line(name, measured, threshold, ok);
    }

    // Runs a check body; an exception becomes a failing line instead of
    // aborting the rest of the suite.
    void guarded(const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            std::string what = e.what();
            for (auto& c : what)
                if (c == ' ')
                    c = '_';
            line(name, "error:" + what, "-", false);
        }
    }

    VerifyReport finish(const std::string& suite) {
        VerifyReport rep;
        rep.checks = checks_;
        rep.failures = failures_;
        for (const auto& l : lines_)
            rep.text += l + "\n";
        rep.text += "suite=" + suite + " checks=" + std::to_string(checks_) +
                    " failures=" + std::to_string(failures_) + "\n";
        return rep;
    }

private:
    void line(const std::string& name, const std::string& measured,
              const std::string& threshold, bool ok) {
        lines_.push_back(name + " measured=" + measured + " threshold=" + threshold +
                         (ok ? " pass" : " fail"));
        ++checks_;
        if (!ok)
            ++failures_;
    }

    std::vector<std::string> lines_;
    int checks_ = 0;
    int failures_ = 0;
};

inline const std::vector<std::complex<double>>& sample_z() {
    static const std::vector<std::complex<double>> z = {
        {1.0, 0.0}, {0.0, 2.0}, {-1.5, 0.5}};
    return z;
}

inline std::string ztag(std::complex<double> z) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g%+gi", z.real(), z.imag());
    return buf;
}

inline void suite_eigen(Reporter& rep, const RunConfig& cfg) {
    for (int r = 1; r <= 5; ++r) {
        for (double x : {0.01, 1.0, 10.0, 50.0}) {
            const std::string name =
                "ode_residual_r" + std::to_string(r) + "_x" + fmt(x);
            rep.guarded(name, [&] {
                const double res = std::fabs(eigenfun::ode_residual(r, x)) /
                                   std::max(1.0, std::fabs(eigenfun::eval_E(r, x)));
                rep.add(name, res, 1e-10, true);
            });
        }
        const std::string icname = "initial_conditions_r" + std::to_string(r);
        rep.guarded(icname, [&] {
            const auto d = eigenfun::derivatives_at_zero(r);
            double dev = 0.0;
            for (int k = 0; k < r; ++k)
                dev = std::max(dev, std::fabs(d[k]));
            mpz_class rfac = exact::factorial(r);
            dev = std::max(dev, std::fabs(d[r] - rfac.get_d()));
            rep.add(icname, dev, 0.0, true);
        });
    }

    rep.guarded("bessel_identity_max_rel", [&] {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double x = 50.0 * i / 199.0;
            const double e = eigenfun::eval_E(1, x);
            const double b = std::sqrt(x) * specfun::bessel_i1(2.0 * std::sqrt(x));
            worst = std::max(worst, std::fabs(e - b) / std::max(1.0, e));
        }
        rep.add("bessel_identity_max_rel", worst, 1e-12, true);
    });

    for (int r = 1; r <= 3; ++r) {
        for (const auto& z : sample_z()) {
            const std::string name =
                "eigenproperty_r" + std::to_string(r) + "_z" + ztag(z);
            rep.guarded(name, [&] {
                const double res = fockstate::eigen_residual(r, z, cfg.tail_tol);
                rep.add(name, res, 10.0 * cfg.tail_tol * std::max(1.0, std::abs(z)), true);
            });
        }
    }
}

inline void suite_state(Reporter& rep, const RunConfig& cfg) {
    const double build_tol = std::min(cfg.tail_tol, 1e-6);
    for (int r = 1; r <= 3; ++r) {
        for (const auto& z : sample_z()) {
            const std::string name = "norm_r" + std::to_string(r) + "_z" + ztag(z);
            rep.guarded(name, [&] {
                const auto st = fockstate::build_state(r, z, build_tol);
                double nrm = 0.0;
                for (const auto& c : st.coefficients)
                    nrm += std::norm(c);
                rep.add(name, std::fabs(nrm - 1.0), st.truncation_tail + 1e-14, true);
            });
        }

        for (double x : {0.3, 1.0, 5.0, 12.0}) {
            const std::string name =
                "normalization_two_route_r" + std::to_string(r) + "_x" + fmt(x);
            rep.guarded(name, [&] {
                const double series = fockstate::normalization_N(r, x);
                const auto st = fockstate::build_state(r, {std::sqrt(x), 0.0}, 1e-14);
                double nrm = 0.0;
                for (const auto& c : st.coefficients)
                    nrm += std::norm(c);
                // The coefficient route reconstructs N from the unnormalized
                // sum: N = (sum x^n/rho) while coefficients carry 1/N.
                double raw = 0.0, pw = 1.0;
                for (std::size_t n = 0; n < st.coefficients.size(); ++n) {
                    raw += pw / exact::rho(r, n).get_d();
                    pw *= x;
                }
                rep.add(name, std::fabs(series / raw - 1.0), 1e-12, true);
            });
        }

        const std::complex<double> z1{1.0, 0.5}, z2{-0.7, 1.2};
        const std::string hname = "overlap_conjugate_symmetry_r" + std::to_string(r);
        rep.guarded(hname, [&] {
            const auto k12 = fockstate::overlap(r, z1, z2);
            const auto k21 = fockstate::overlap(r, z2, z1);
            rep.add(hname, std::abs(k12 - std::conj(k21)), 1e-13, true);
        });
        const std::string dname = "overlap_unit_diagonal_r" + std::to_string(r);
        rep.guarded(dname, [&] {
            rep.add(dname, std::abs(fockstate::overlap(r, z1, z1) - 1.0), 1e-12, true);
        });

        const std::string tname = "time_evolution_preserves_norm_r" + std::to_string(r);
        rep.guarded(tname, [&] {
            const auto st = fockstate::build_state(r, {1.3, -0.4}, 1e-14);
            const auto ev = fockstate::time_evolve(st, 2.7);
            double n0 = 0.0, n1 = 0.0;
            for (std::size_t n = 0; n < st.coefficients.size(); ++n) {
                n0 += std::norm(st.coefficients[n]);
                n1 += std::norm(ev.coefficients[n]);
            }
            rep.add(tname, std::fabs(n1 - n0), 1e-14, true);
        });
    }

    for (int r = 1; r <= 6; ++r) {
        const std::string name = "stirling_three_routes_r" + std::to_string(r);
        rep.guarded(name, [&] {
            const auto up = fockstate::StirlingTable::build(r + 1);
            long mismatches = 0;
            for (long m = -5; m <= 20; ++m) {
                mpz_class direct = 1;
                for (int k = 1; k <= r; ++k)
                    direct *= mpz_class(m - k);
                if (fockstate::stirling_f(r, m) != direct)
                    ++mismatches;
                // third route: unsigned table of order r+1 against (m-r-1) powers
                mpz_class alt = 0, base = mpz_class(m - r - 1), pw = 1;
                for (int k = 1; k <= r + 1; ++k) {
                    mpz_class a = abs(up.sigma[k - 1]);
                    alt += a * pw;
                    pw *= base;
                }
                if (alt != direct)
                    ++mismatches;
            }
            rep.add(name, static_cast<double>(mismatches), 0.0, true);
        });
    }
}

inline void suite_statistics(Reporter& rep, const RunConfig&) {
    for (int r = 1; r <= 3; ++r) {
        for (double x : {0.3, 1.0, 5.0, 12.0}) {
            const std::string qname =
                "mandel_two_route_r" + std::to_string(r) + "_x" + fmt(x);
            rep.guarded(qname, [&] {
                const double q1 = statistics::mandel_Q(r, x);
                const double n1 = statistics::moments_np(r, x, 1);
                const double n2 = statistics::moments_np(r, x, 2);
                const double q2 = (n2 - n1 * n1) / n1 - 1.0;
                rep.add(qname, std::fabs(q1 - q2), 1e-10, true);
            });

            const std::string pname =
                "photon_pair_two_route_r" + std::to_string(r) + "_x" + fmt(x);
            rep.guarded(pname, [&] {
                const double lib = statistics::expectation_pp(r, x, 2);
                const auto st = fockstate::build_state(r, {std::sqrt(x), 0.0}, 1e-14);
                double direct = 0.0;
                for (std::size_t n = 0; n < st.coefficients.size(); ++n) {
                    const double m = static_cast<double>(n) + r;
                    direct += std::norm(st.coefficients[n]) * m * (m - 1.0);
                }
                rep.add(pname, std::fabs(lib - direct) / std::max(1.0, std::fabs(lib)),
                        1e-10, true);
            });
        }

        const std::string negname = "mandel_negative_r" + std::to_string(r);
        rep.guarded(negname, [&] {
            double worst = -std::numeric_limits<double>::infinity();
            for (int i = 1; i <= 30; ++i)
                worst = std::max(worst, statistics::mandel_Q(r, static_cast<double>(i)));
            rep.verdict(negname, fmt(worst), "0", worst < 0.0);
        });
    }

    for (int r = 1; r <= 2; ++r) {
        const std::string oname =
            "mandel_depth_ordering_r" + std::to_string(r) + std::to_string(r + 1);
        rep.guarded(oname, [&] {
            double min_gap = std::numeric_limits<double>::infinity();
            for (double x : {1.0, 5.0, 10.0, 20.0, 30.0})
                min_gap = std::min(min_gap, std::fabs(statistics::mandel_Q(r + 1, x)) -
                                                std::fabs(statistics::mandel_Q(r, x)));
            rep.verdict(oname, fmt(min_gap), "0", min_gap > 0.0);
        });
    }

    rep.guarded("metric_flat_baseline", [&] {
        double worst = 0.0;
        for (double x : {0.1, 1.0, 5.0, 20.0})
            worst = std::max(worst, std::fabs(statistics::standard_cs_omega(x) - 1.0));
        rep.add("metric_flat_baseline", worst, 1e-12, true);
    });

    for (int r = 1; r <= 3; ++r) {
        const std::string vname = "quadrature_vacuum_r" + std::to_string(r);
        rep.guarded(vname, [&] {
            const auto var = statistics::quadrature_variances(r, {0.0, 0.0});
            const double want = 0.5 * (2.0 * r + 1.0);
            const double dev =
                std::max(std::fabs(var.var_x - want), std::fabs(var.var_p - want));
            rep.add(vname, dev, 1e-12, true);
        });
    }

    rep.guarded("squeezing_exists_r1", [&] {
        double best = std::numeric_limits<double>::infinity();
        for (double x : {5.0, 10.0, 15.0, 20.0})
            best = std::min(best,
                            statistics::quadrature_variances(1, {std::sqrt(x), 0.0}).var_x);
        rep.verdict("squeezing_exists_r1", fmt(best), "0.5", best < 0.5);
    });

    rep.guarded("heisenberg_min_product", [&] {
        double min_prod = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 61; ++i) {
            for (int j = 0; j < 61; ++j) {
                const double re = -3.0 + 6.0 * i / 60.0;
                const double im = -3.0 + 6.0 * j / 60.0;
                const auto var = statistics::quadrature_variances(1, {re, im});
                min_prod = std::min(min_prod, std::sqrt(var.var_x * var.var_p));
            }
        }
        rep.add("heisenberg_min_product", min_prod, 0.5, false);
    });
}

inline void suite_moments(Reporter& rep, const RunConfig& cfg) {
    for (int r = 1; r <= 3; ++r) {
        auto spec = momentproblem::MellinBarnesSpec::for_order(
            r, cfg.contour_re, cfg.im_cutoff, cfg.quad_step);
        momentproblem::MomentQuadConfig quad;
        quad.x_max = cfg.x_max_integration;
        quad.n_max = 8;

        rep.guarded("moment_grid_r" + std::to_string(r), [&] {
            momentproblem::MomentVerifier verifier(spec, quad);
            for (int n = 0; n <= 8; ++n) {
                const std::string name =
                    "moment_r" + std::to_string(r) + "_n" + std::to_string(n);
                rep.guarded(name, [&] {
                    rep.add(name, verifier.moment(n).rel_error, 1e-6, true);
                });
            }
        });

        const std::string pname = "weight_positive_r" + std::to_string(r);
        rep.guarded(pname, [&] {
            double min_w = std::numeric_limits<double>::infinity();
            for (int i = 0; i <= 24; ++i) {
                const double x = 1e-4 * std::pow(50.0 / 1e-4, i / 24.0);
                min_w = std::min(min_w, momentproblem::weight_W(spec, x));
            }
            rep.verdict(pname, fmt(min_w), "0", min_w > 0.0);
        });

        const std::string sname = "weight_singular_ordering_r" + std::to_string(r);
        rep.guarded(sname, [&] {
            const double w1 = momentproblem::weight_W(spec, 1e-4);
            const double w2 = momentproblem::weight_W(spec, 1e-2);
            const double w3 = momentproblem::weight_W(spec, 1.0);
            const double min_gap = std::min(w1 - w2, w2 - w3);
            rep.verdict(sname, fmt(min_gap), "0", min_gap > 0.0);
        });
    }
}

inline void suite_nonuniqueness(Reporter& rep, const RunConfig&) {
    for (int r = 1; r <= 3; ++r) {
        bool carleman_ok = false, convex_ok = false;

        const std::string cname = "carleman_exponent_r" + std::to_string(r);
        rep.guarded(cname, [&] {
            const auto res = momentproblem::carleman_sum(r, 2000);
            carleman_ok = res.converges;
            rep.add(cname, res.fitted_exponent, 1.1, false);
        });

        const std::string vname = "log_convexity_min_r" + std::to_string(r);
        rep.guarded(vname, [&] {
            std::vector<double> grid;
            for (int i = 0; i <= 80; ++i)
                grid.push_back(-4.0 + 0.1 * i);
            const double min_dd = momentproblem::log_convexity_check(r, grid);
            convex_ok = min_dd >= -1e-6;
            rep.add(vname, min_dd, -1e-6, false);
        });

        rep.verdict("moment_problem_r" + std::to_string(r),
                    carleman_ok && convex_ok ? "non-unique" : "undetermined", "non-unique",
                    carleman_ok && convex_ok);
    }
}

} // namespace detail

// Runs the selected suite and assembles the report; exit-code policy is the
// caller's (0 iff failures == 0).
inline VerifyReport run_verify(const RunConfig& cfg) {
    static const std::vector<std::string> known = {"eigen",   "state",        "statistics",
                                                   "moments", "nonuniqueness", "all"};
    if (std::find(known.begin(), known.end(), cfg.suite) == known.end())
        throw std::invalid_argument("unknown suite: " + cfg.suite);
    if (!(cfg.tail_tol > 0.0))
        throw std::invalid_argument("tail_tol must be positive");

    detail::Reporter rep;
    const bool all = cfg.suite == "all";
    if (all || cfg.suite == "eigen")
        detail::suite_eigen(rep, cfg);
    if (all || cfg.suite == "state")
        detail::suite_state(rep, cfg);
    if (all || cfg.suite == "statistics")
        detail::suite_statistics(rep, cfg);
    if (all || cfg.suite == "moments")
        detail::suite_moments(rep, cfg);
    if (all || cfg.suite == "nonuniqueness")
        detail::suite_nonuniqueness(rep, cfg);
    return rep.finish(cfg.suite);
}

} // namespace hbcs::run
