#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "hbcs/statistics.hpp"
#include "oracles.hpp"

namespace st = hbcs::statistics;
using std::complex;

namespace {

long one(long) { return 1; }

// x^n / rho_r(n) over the full series sum, both exact rationals
double probability_oracle(int r, int k, double x) {
    const int n = k - r;
    mpq_class t = 1;
    for (int j = 0; j < n; ++j)
        t *= mpq_class(x);
    t /= mpq_class(oracle::rho_ref(r, n));
    return t.get_d() / oracle::rho_series(r, mpq_class(x), one);
}

// <(a+)^p a^s> summed over explicit truncated Fock components.  The
// coefficient moduli are built in 256-bit floats from the exact weights, so
// nothing here reuses the library's series code.
complex<double> ps_bruteforce(int r, complex<double> z, int p, int s) {
    const int terms = 70;
    const double x = std::norm(z);
    const double theta = std::arg(z);
    const double N = oracle::rho_series(r, mpq_class(x), one, 160);

    std::vector<complex<double>> c(terms);
    for (int n = 0; n < terms; ++n) {
        mpf_class w(x, 512);
        mpf_class num(1, 512);
        for (int j = 0; j < n; ++j)
            num *= w;
        num /= mpf_class(oracle::rho_ref(r, n), 512);
        const mpf_class root = sqrt(num);
        c[n] = std::polar(root.get_d() / std::sqrt(N), theta * n);
    }

    complex<double> sum = 0.0;
    for (int n = 0; n < terms; ++n) {
        const int q = n + r;
        const int m = n + p - s;
        if (q < s || m < 0 || m >= terms)
            continue;
        double f = 1.0, g = 1.0;
        for (int j = q - s + 1; j <= q; ++j)
            f *= j;
        for (int j = q - s + 1; j <= q - s + p; ++j)
            g *= j;
        sum += std::conj(c[m]) * c[n] * std::sqrt(f) * std::sqrt(g);
    }
    return sum;
}

} // namespace

TEST_CASE("photon number distribution", "[statistics]") {
    CHECK(st::probability_P(1, 1, 0.0) == 1.0);
    CHECK(st::probability_P(1, 2, 0.0) == 0.0);
    CHECK(st::probability_P(3, 3, 0.0) == 1.0);

    CHECK_THAT(st::probability_P(1, 3, 2.0),
               Catch::Matchers::WithinRel(0.0765874875744611816, 1e-13));
    CHECK_THAT(st::probability_P(1, 3, 2.0),
               Catch::Matchers::WithinRel(probability_oracle(1, 3, 2.0), 1e-13));

    // k = r+1 at x = 1: weight 1/rho_1(1) = 1/2 over the series sum
    CHECK_THAT(st::probability_P(1, 2, 1.0),
               Catch::Matchers::WithinRel(0.5 / 1.54283863850100257, 1e-13));

    for (int r = 1; r <= 3; ++r)
        for (int k = r; k <= r + 6; ++k)
            CHECK_THAT(st::probability_P(r, k, 3.5),
                       Catch::Matchers::WithinRel(probability_oracle(r, k, 3.5), 1e-12));

    for (int r = 1; r <= 3; ++r) {
        double total = 0.0;
        for (int k = r; k <= r + 60; ++k)
            total += st::probability_P(r, k, 4.0);
        CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-12));
    }

    CHECK_THROWS_AS(st::probability_P(2, 1, 1.0), std::domain_error);
    CHECK_THROWS_AS(st::probability_P(1, 1, -1.0), std::domain_error);
}

TEST_CASE("photon number moments", "[statistics]") {
    CHECK(st::mean_photon_number(3, 0.0) == 3.0);
    CHECK_THAT(st::mean_photon_number(1, 2.0),
               Catch::Matchers::WithinRel(1.6258971272752901, 1e-13));

    auto mean_oracle = [](int r, double x) {
        const double num =
            oracle::rho_series(r, mpq_class(x), [&](long n) { return n + r; });
        return num / oracle::rho_series(r, mpq_class(x), one);
    };
    CHECK_THAT(st::mean_photon_number(1, 1.0),
               Catch::Matchers::WithinRel(mean_oracle(1, 1.0), 1e-13));
    CHECK_THAT(st::mean_photon_number(2, 4.5),
               Catch::Matchers::WithinRel(mean_oracle(2, 4.5), 1e-13));

    // two routes to <n>
    for (int r = 1; r <= 3; ++r)
        for (double x : {0.5, 2.0, 8.0})
            CHECK_THAT(st::moments_np(r, x, 1),
                       Catch::Matchers::WithinRel(st::expectation_pp(r, x, 1), 1e-12));
}

TEST_CASE("normally ordered equal-power expectations", "[statistics]") {
    CHECK(st::expectation_pp(2, 3.0, 0) == 1.0);
    CHECK(st::expectation_pp(1, 0.0, 1) == 1.0);

    auto pp_oracle = [](int r, double x, int p) {
        const double num = oracle::rho_series(r, mpq_class(x), [&](long n) {
            long f = 1;
            for (int j = 0; j < p; ++j)
                f *= n + r - j;
            return f;
        });
        return num / oracle::rho_series(r, mpq_class(x), one);
    };
    CHECK_THAT(st::expectation_pp(2, 3.0, 2),
               Catch::Matchers::WithinRel(pp_oracle(2, 3.0, 2), 1e-12));
    // p larger than the base level exercises the vanishing falling factorial
    CHECK_THAT(st::expectation_pp(1, 2.0, 3),
               Catch::Matchers::WithinRel(pp_oracle(1, 2.0, 3), 1e-12));

    CHECK_THROWS_AS(st::expectation_pp(1, 1.0, -1), std::domain_error);
}

TEST_CASE("general normally ordered expectations", "[statistics]") {
    CHECK(st::expectation_ps(2, {0.7, 0.2}, 0, 0) == complex<double>(1.0, 0.0));
    CHECK(st::expectation_ps(1, 0.0, 2, 1) == complex<double>(0.0, 0.0));
    CHECK(st::expectation_ps(1, 0.0, 1, 2) == complex<double>(0.0, 0.0));

    const auto frozen = st::expectation_ps(2, {0.8, -0.3}, 1, 2);
    CHECK_THAT(frozen.real(),
               Catch::Matchers::WithinRel(0.776913555917848069, 1e-12));
    CHECK_THAT(frozen.imag(),
               Catch::Matchers::WithinRel(-0.291342583469193026, 1e-12));

    const complex<double> points[] = {{0.9, 0.4}, {-1.2, 0.8}};
    for (int r = 1; r <= 3; ++r)
        for (auto z : points)
            for (int p = 0; p <= 3; ++p)
                for (int s = 0; s <= 3; ++s) {
                    const auto lib = st::expectation_ps(r, z, p, s);
                    const auto ref = ps_bruteforce(r, z, p, s);
                    CHECK(std::abs(lib - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
                }

    // <a> from the truncated coefficient inner product at r=1, z=1
    const auto ea = st::expectation_ps(1, 1.0, 0, 1);
    CHECK(std::abs(ea - ps_bruteforce(1, 1.0, 0, 1)) <= 1e-12);

    CHECK_THROWS_AS(st::expectation_ps(1, 1.0, -1, 0), std::domain_error);
    CHECK_THROWS_AS(st::expectation_ps(1, 1.0, 0, -2), std::domain_error);
}

TEST_CASE("states are eigenvectors of the lowering word", "[statistics]") {
    // <(a+)^r a^(r+1)> = z and its adjoint, exactly the defining property
    const complex<double> zs[] = {{1.0, 0.0}, {0.0, 2.0}, {-1.5, 0.5}, {1.0, 0.5}};
    for (int r = 1; r <= 3; ++r)
        for (auto z : zs) {
            CHECK(std::abs(st::expectation_ps(r, z, r, r + 1) - z) <=
                  1e-11 * std::max(1.0, std::abs(z)));
            CHECK(std::abs(st::expectation_ps(r, z, r + 1, r) - std::conj(z)) <=
                  1e-11 * std::max(1.0, std::abs(z)));
        }
}

TEST_CASE("Mandel parameter: frozen points, origin, slope, two routes", "[statistics]") {
    CHECK_THAT(st::mandel_Q(1, 0.5),
               Catch::Matchers::WithinRel(-0.8468461188094915, 1e-13));
    CHECK_THAT(st::mandel_Q(2, 1.0),
               Catch::Matchers::WithinRel(-0.96489441132467117, 1e-13));

    for (int r = 1; r <= 4; ++r)
        CHECK(st::mandel_Q(r, 0.0) == -1.0);

    // sub-Poissonian across the family
    CHECK(st::mandel_Q(1, 5.0) < 0.0);

    // first-order slope of Q + 1 at the origin is rho0 / (r rho1)
    const double slopes[] = {0.5, 1.0 / 24.0, 1.0 / 432.0};
    for (int r = 1; r <= 3; ++r) {
        const double h = 1e-6;
        const double measured = (st::mandel_Q(r, h) + 1.0) / h;
        CHECK_THAT(measured, Catch::Matchers::WithinRel(slopes[r - 1], 1e-5));
    }

    // derivative form against the moment form
    for (int r = 1; r <= 3; ++r)
        for (double x : {0.5, 2.0, 8.0}) {
            const double n1 = st::moments_np(r, x, 1);
            const double n2 = st::moments_np(r, x, 2);
            const double moment_form = (n2 - n1 * n1) / n1 - 1.0;
            CHECK(std::fabs(st::mandel_Q(r, x) - moment_form) <= 1e-10);
        }

    // exact-rational route
    for (int r = 1; r <= 2; ++r)
        for (double x : {0.5, 3.0}) {
            const double s0 = oracle::rho_series(r, mpq_class(x), one);
            const double sa =
                oracle::rho_series(r, mpq_class(x), [&](long n) { return n + r; });
            const double sb = oracle::rho_series(
                r, mpq_class(x), [&](long n) { return (n + r) * (n + r - 1); });
            CHECK_THAT(st::mandel_Q(r, x),
                       Catch::Matchers::WithinRel(sb / sa - sa / s0, 1e-12));
        }

    CHECK_THROWS_AS(st::mandel_Q(1, -2.0), std::domain_error);
}

TEST_CASE("metric factor and its flat baseline", "[statistics]") {
    CHECK_THAT(st::metric_omega(1, 1.0),
               Catch::Matchers::WithinRel(0.294318753770031886, 1e-13));

    // origin limits rho0/rho1 = 1/(r!^2 (r+1))
    CHECK(st::metric_omega(1, 0.0) == 0.5);
    CHECK(st::metric_omega(2, 0.0) == 1.0 / 12.0);
    CHECK(st::metric_omega(3, 0.0) == 1.0 / 144.0);

    // Richardson differentiation of x N'/N built from exact-rational sums
    auto F = [](int r, double x) {
        const double s1 =
            oracle::rho_series(r, mpq_class(x), [](long n) { return n; });
        return s1 / oracle::rho_series(r, mpq_class(x), one);
    };
    for (int r = 1; r <= 3; ++r)
        for (double x : {0.4, 1.0, 3.0}) {
            const double h = 1e-5 * std::max(1.0, x);
            const double fd =
                (F(r, x - 2 * h) - 8 * F(r, x - h) + 8 * F(r, x + h) - F(r, x + 2 * h)) /
                (12 * h);
            CHECK_THAT(st::metric_omega(r, x), Catch::Matchers::WithinRel(fd, 1e-7));
        }

    // exponential series in place of N gives the flat metric
    for (double x : {0.0, 0.5, 3.0, 10.0})
        CHECK_THAT(st::standard_cs_omega(x), Catch::Matchers::WithinAbs(1.0, 1e-13));
}

TEST_CASE("quadrature variances", "[statistics]") {
    // strong squeezing point on the real axis
    const auto v = st::quadrature_variances(1, std::sqrt(15.0));
    CHECK_THAT(v.var_x, Catch::Matchers::WithinAbs(0.382786201827051149, 5e-13));
    CHECK_THAT(v.var_p, Catch::Matchers::WithinAbs(1.5, 5e-13));
    CHECK(v.var_x < 0.5);

    // vacuum of the family: both variances (2r+1)/2
    for (int r = 1; r <= 3; ++r) {
        const auto v0 = st::quadrature_variances(r, 0.0);
        CHECK_THAT(v0.var_x, Catch::Matchers::WithinAbs((2.0 * r + 1.0) / 2.0, 1e-14));
        CHECK_THAT(v0.var_p, Catch::Matchers::WithinAbs((2.0 * r + 1.0) / 2.0, 1e-14));
    }

    const complex<double> zs[] = {{1.0, 0.0}, {0.7, -1.1}};
    for (int r = 1; r <= 2; ++r)
        for (auto z : zs) {
            const auto a = st::quadrature_variances(r, z);

            // rotating z by i swaps the two quadratures
            const auto b = st::quadrature_variances(r, z * complex<double>(0.0, 1.0));
            CHECK_THAT(b.var_x, Catch::Matchers::WithinRel(a.var_p, 1e-12));
            CHECK_THAT(b.var_p, Catch::Matchers::WithinRel(a.var_x, 1e-12));

            // assembly identity: the pair terms cancel in the sum
            const double en = st::expectation_ps(r, z, 1, 1).real();
            const auto ea = st::expectation_ps(r, z, 0, 1);
            const auto ead = st::expectation_ps(r, z, 1, 0);
            const double expected_sum = 1.0 + 2.0 * en - 2.0 * (ea * ead).real();
            CHECK_THAT(a.var_x + a.var_p, Catch::Matchers::WithinRel(expected_sum, 1e-12));

            CHECK(a.var_x > 0.0);
            CHECK(a.var_p > 0.0);
            CHECK(a.var_x * a.var_p >= 0.25 - 1e-12);
        }
}

TEST_CASE("Poisson reference distribution", "[statistics]") {
    CHECK(st::standard_cs_probability(0, 0.0) == 1.0);
    CHECK(st::standard_cs_probability(3, 0.0) == 0.0);
    CHECK_THAT(st::standard_cs_probability(1, 1.0),
               Catch::Matchers::WithinRel(std::exp(-1.0), 1e-14));
    double total = 0.0;
    for (int k = 0; k <= 80; ++k)
        total += st::standard_cs_probability(k, 5.0);
    CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THROWS_AS(st::standard_cs_probability(-1, 1.0), std::domain_error);
}

TEST_CASE("assembled statistics report is consistent", "[statistics]") {
    const complex<double> z(1.2, -0.5);
    const auto rep = st::compute_statistics(2, z);
    const double x = std::norm(z);
    CHECK(rep.r == 2);
    CHECK(rep.x == x);
    CHECK(rep.mean_n == st::expectation_pp(2, x, 1));
    CHECK_THAT(rep.mean_n2,
               Catch::Matchers::WithinRel(st::moments_np(2, x, 2), 1e-12));
    CHECK(rep.mandel_q == st::mandel_Q(2, x));
    CHECK(rep.metric_omega == st::metric_omega(2, x));
    const auto v = st::quadrature_variances(2, z);
    CHECK(rep.var_x == v.var_x);
    CHECK(rep.var_p == v.var_p);
}
