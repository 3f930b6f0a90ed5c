#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qmrank/eichler.hpp"

using namespace qmrank;

namespace {

const PrecisionContext& ctx() {
    static PrecisionContext c;
    return c;
}

} // namespace

TEST_CASE("fractional linear action and its pole") {
    const cx64 x(0.1, 0.0);
    const cx64 img = s_ell_apply<cx64>(18, x);
    CHECK(std::abs(img - x / (18.0 * x + 1.0)) < 1e-15);
    CHECK_THROWS_AS(s_ell_apply<cx64>(18, cx64(-1.0 / 18.0, 0.0)), domain_error);
}

TEST_CASE("elementary error term at the origin") {
    // e(3/10) (i - 1) for the (1/5, l = 150) pair
    const cx64 got = E1_err<cx64>(RootOfUnity(1, 5), 150, cx64(0.0, 0.0));
    const double pi = 3.14159265358979323846;
    const cx64 want = std::polar(1.0, 2.0 * pi * 0.3) * cx64(-1.0, 1.0);
    CHECK(std::abs(got - want) < 1e-14);
}

TEST_CASE("weight 3/2 period integral reproduces the mordell integral") {
    // h(a tau - b) = -e(a^2 tau/2 - a(b + 1/2)) I_{a+1/2, b+1/2}(tau)
    const double pi = 3.14159265358979323846;
    const double a = 0.31, b = -0.17;
    const cx64 tau(0.25, 0.9);
    const cx64 lhs = mordell_h<cx64>(a * tau - b, tau, ctx());
    const cx64 pref = -std::exp(cx64(0.0, pi) * (a * a) * tau -
                                cx64(0.0, 2.0 * pi) * a * (b + 0.5));
    const cx64 rhs =
        pref * period_integral_g<cx64>(a + 0.5, b + 0.5, 1, Rational(0, 1), tau, ctx());
    CHECK(std::abs(lhs - rhs) < 1e-8);
}

TEST_CASE("two routes to the completed difference agree") {
    const RootOfUnity ab(1, 3);
    const long ell = 18;
    const cx64 tau(0.02, 0.24);
    const cx64 lt1 = 18.0 * tau + 1.0;
    const cx64 direct = H_alpha_beta<cx64>(ab, ell, tau, ctx());
    const double pi = 3.14159265358979323846;
    const cx64 phase = std::exp(cx64(0.0, -2.0 * pi) * (18.0 / 24.0));
    const cx64 defect = F_alpha_beta<cx64>(ab, tau, ctx()) -
                        phase / std::sqrt(lt1) *
                            F_alpha_beta<cx64>(ab, s_ell_apply<cx64>(18, tau), ctx());
    CHECK(std::abs(direct - defect) < 1e-7);
}

TEST_CASE("split pieces sum to the combined transform term") {
    const Rational r(0, 1); // lattice remainder for (1, 3)
    const long ell = 18;
    const cx64 tau(0.03, 0.22);
    const double v = 0.004;
    for (int s : {1, -1}) {
        const auto parts = T1_T2_split<cx64>(v, s, r, ell, tau, ctx());
        const cx64 sum = T1_plus_T2<cx64>(v, s, r, ell, tau, ctx());
        CHECK(std::abs(parts[0] + parts[1] - sum) < 1e-10);
    }
}

TEST_CASE("cocycle terms are finite at interior rationals") {
    const RootOfUnity ab(1, 3);
    const cx64 h1 = cocycle_H1_term<cx64>(ab, 18, cx64(0.1, 0.0), ctx());
    CHECK(std::isfinite(h1.real()));
    CHECK(std::isfinite(h1.imag()));
    const cx64 h2 = cocycle_H2_term<cx64>(ab, 18, cx64(0.1, 0.0), ctx());
    CHECK(std::isfinite(h2.real()));
    CHECK(std::isfinite(h2.imag()));
}

TEST_CASE("tau-domain combination has unimodular translation constant") {
    const ZetaVector v = make_zeta_vector(2, 1, {{1, 3}});
    const PiOracle pi = PiOracle::default_ones(v);
    const cx64 tau(0.21, 0.9);
    const cx64 c = hminus_h<cx64>(v, tau + 1.0, pi, ctx()) / hminus_h<cx64>(v, tau, pi, ctx());
    CHECK(std::abs(std::abs(c) - 1.0) < 1e-9);
}
