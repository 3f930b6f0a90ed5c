#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qmrank/kernels.hpp"

using namespace qmrank;

namespace {

const PrecisionContext& ctx() {
    static PrecisionContext c;
    return c;
}

// completely naive reference: sum nu in 1/2 + Z over a fixed window
cx64 theta_naive(cx64 u, cx64 tau) {
    const double pi = 3.14159265358979323846;
    cx64 s(0.0, 0.0);
    for (int n = -40; n < 40; ++n) {
        const double nu = n + 0.5;
        s += std::exp(cx64(0.0, pi) * (nu * nu * tau) +
                      cx64(0.0, 2.0 * pi) * nu * (u + 0.5));
    }
    return s;
}

// Simpson quadrature for h(z; tau) = int e^{pi i tau t^2 - 2 pi z t} / cosh(pi t) dt
cx64 mordell_naive(cx64 z, cx64 tau) {
    const double pi = 3.14159265358979323846;
    const double a = -8.0, b = 8.0;
    const int n = 32768; // even
    const double h = (b - a) / n;
    auto f = [&](double t) {
        return std::exp(cx64(0.0, pi) * tau * (t * t) - 2.0 * pi * z * t) / std::cosh(pi * t);
    };
    cx64 s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + h * i) * ((i % 2 != 0) ? 4.0 : 2.0);
    return s * (h / 3.0);
}

} // namespace

TEST_CASE("tau point validation") {
    CHECK_THROWS_AS(TauPoint<cx64>(cx64(0.3, 0.0)), domain_error);
    CHECK_THROWS_AS(TauPoint<cx64>(cx64(0.3, -1.0)), domain_error);
    CHECK_NOTHROW(TauPoint<cx64>(cx64(0.3, 0.4)));
}

TEST_CASE("theta against a naive direct sum") {
    const cx64 tau(0.2, 0.9);
    for (const cx64 u : {cx64(0.3, 0.1), cx64(-0.45, -0.2), cx64(0.0, 0.35)}) {
        const cx64 a = theta<cx64>(u, tau, ctx());
        const cx64 b = theta_naive(u, tau);
        CHECK(std::abs(a - b) < 5e-12);
    }
    // odd function: vanishes at the origin
    CHECK(std::abs(theta<cx64>(cx64(0.0, 0.0), tau, ctx())) < 5e-12);
}

TEST_CASE("eta at the imaginary unit") {
    // Gamma(1/4) / (2 pi^{3/4})
    const cx64 v = eta_h<cx64>(cx64(0.0, 1.0), ctx());
    CHECK(std::abs(v - cx64(0.7682254223260566, 0.0)) < 1e-13);
}

TEST_CASE("mordell integral against Simpson quadrature") {
    CHECK(std::abs(mordell_h<cx64>(cx64(0.0, 0.0), cx64(0.0, 1.0), ctx()) -
                   cx64(0.6690633391358686, 0.0)) < 1e-12);
    const cx64 tau(0.3, 1.2);
    for (const cx64 z : {cx64(0.2, 0.1), cx64(-0.4, 0.25)}) {
        CHECK(std::abs(mordell_h<cx64>(z, tau, ctx()) - mordell_naive(z, tau)) < 1e-9);
    }
}

TEST_CASE("theta power sums against naive loops") {
    const double pi = 3.14159265358979323846;
    const cx64 sigma(0.15, 0.6);
    const double a = 0.23, b = -0.41;
    for (int p = 0; p <= 2; ++p) {
        cx64 naive(0.0, 0.0);
        for (int n = -40; n < 40; ++n) {
            const double nu = n + a;
            naive += std::pow(nu, p) *
                     std::exp(cx64(0.0, pi) * (nu * nu) * sigma + cx64(0.0, 2.0 * pi) * nu * b);
        }
        const cx64 got = theta_sum_pow<cx64>(p, a, cx64(b), sigma, ctx());
        CHECK(std::abs(got - naive) < 5e-12);
    }
    CHECK_THROWS_AS(theta_sum_pow<cx64>(3, a, cx64(b), sigma, ctx()), domain_error);
}

TEST_CASE("q powers with rational exponent") {
    const double pi = 3.14159265358979323846;
    const cx64 tau(0.4, 0.8);
    const cx64 got = qpow_rat<cx64>(tau, Rational(-1, 6));
    const cx64 expect = std::exp(cx64(0.0, 2.0 * pi) * tau * (-1.0 / 6.0));
    CHECK(std::abs(got - expect) < 1e-14);
}

TEST_CASE("appell sum guards its pole") {
    const cx64 tau(0.1, 0.8);
    CHECK_THROWS_AS(appell_a3<cx64>(cx64(0.0, 0.0), cx64(0.2, 0.3), tau, ctx()), domain_error);
}

TEST_CASE("kernel S: explicit form equals the quotient form") {
    const RootOfUnity ab(1, 3);
    const cx64 tau(0.35, 0.8);
    const cx64 u(1.0 / 3.0, 0.0);
    const cx64 lhs = script_R3<cx64>(u, -2.0 * tau, tau, ctx()) / eta_h<cx64>(tau, ctx());
    CHECK(std::abs(lhs - S_func<cx64>(ab, tau, ctx())) < 1e-9);
}

TEST_CASE("multiprecision backend reproduces double results") {
    PrecisionContext mp;
    mp.working_digits = 50;
    mp.target_abs_err = 1e-13;
    const cx50 tau = make_cx<cx50>(0.2, 0.9);
    const cx50 u = make_cx<cx50>(0.3, 0.1);
    const cx50 v = theta<cx50>(u, tau, mp);
    const cx64 vd = theta<cx64>(cx64(0.3, 0.1), cx64(0.2, 0.9), ctx());
    CHECK(std::abs(static_cast<double>(v.real()) - vd.real()) < 1e-12);
    CHECK(std::abs(static_cast<double>(v.imag()) - vd.imag()) < 1e-12);
}
