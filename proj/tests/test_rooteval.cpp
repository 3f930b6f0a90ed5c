#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qmrank/cyclotomic.hpp"
#include "qmrank/rooteval.hpp"

using namespace qmrank;

namespace {

const PrecisionContext& ctx() {
    static PrecisionContext c;
    return c;
}

cx64 unit_root(std::int64_t a, std::int64_t b) {
    const double pi = 3.14159265358979323846;
    return std::polar(1.0, 2.0 * pi * static_cast<double>(a) / static_cast<double>(b));
}

} // namespace

TEST_CASE("pinned single-variable values") {
    CHECK(std::abs(r1_at_root<cx64>(RootOfUnity(1, 3), RationalPoint(0, 1), ctx()) -
                   cx64(1.5, 0.0)) < 1e-12);
    CHECK(std::abs(r1_at_root<cx64>(RootOfUnity(1, 3), RationalPoint(1, 2), ctx())) < 1e-12);
    CHECK(std::abs(r1_at_root<cx64>(RootOfUnity(1, 5), RationalPoint(0, 1), ctx()) -
                   cx64((5.0 + std::sqrt(5.0)) / 2.0, 0.0)) < 1e-12);
}

TEST_CASE("exact evaluation returns closed rationals where expected") {
    CHECK(r1_at_root_exact(RootOfUnity(1, 3), RationalPoint(0, 1)).str() == "3/2");
    const CyclotomicNumber z = r1_at_root_exact(RootOfUnity(1, 3), RationalPoint(1, 2));
    CHECK(z.is_zero());
    // the golden value lies in Q(zeta_5), not in Q
    const CyclotomicNumber g = r1_at_root_exact(RootOfUnity(1, 5), RationalPoint(0, 1));
    CHECK(std::abs(g.to_complex<cx64>() - cx64((5.0 + std::sqrt(5.0)) / 2.0, 0.0)) < 1e-12);
}

TEST_CASE("non-quantum arguments are rejected") {
    CHECK_THROWS_AS(r1_at_root<cx64>(RootOfUnity(1, 3), RationalPoint(1, 3), ctx()), domain_error);
    const ZetaVector v = make_zeta_vector(2, 1, {{1, 5}});
    CHECK_THROWS_AS(rn_at_root<cx64>(v, RationalPoint(1, 5), ctx()), domain_error);
}

TEST_CASE("multivariable value against a bespoke truncated double sum") {
    // vector (1/3, 1/3) at q = -1: full-cycle factor per index is
    // (1 - x^2)(1 - x^-2) with x = e(1/3), giving geometric decay 1/3 per period
    const ZetaVector v = make_zeta_vector(2, 1, {{1, 3}});
    const RationalPoint pt(1, 2);
    const cx64 got = rn_at_root<cx64>(v, pt, ctx());

    const cx64 x = unit_root(1, 3);
    const cx64 xi = unit_root(-1, 3);
    auto q = [&](std::int64_t e) { return unit_root(e % 2, 2); };
    cx64 direct(0.0, 0.0);
    const int M = 160; // ~ 3^-80 per truncated dimension
    cx64 d1(1.0, 0.0);
    for (int m1 = 1; m1 <= M; ++m1) {
        d1 *= (1.0 - x * q(m1)) * (1.0 - xi * q(m1));
        cx64 d2 = d1 * (1.0 - x * q(m1)) * (1.0 - xi * q(m1));
        for (int m2 = 0; m2 <= M; ++m2) {
            if (m2 > 0) d2 *= (1.0 - x * q(m1 + m2)) * (1.0 - xi * q(m1 + m2));
            const std::int64_t s = m1 + m2;
            direct += q(s * s + m1) / d2;
        }
    }
    CHECK(std::abs(got - direct) < 1e-10);
}

TEST_CASE("quotient-form value matches its exact counterpart") {
    const RootOfUnity ab(1, 3);
    const RationalPoint pt(1, 2);
    const cx64 num = a3_over_pochinf_at_root<cx64>(ab, pt, ctx());
    CHECK(std::abs(num - ap_at_root_exact(ab, pt).to_complex<cx64>()) < 1e-12);
}

TEST_CASE("oracle shape validation") {
    const ZetaVector v = make_zeta_vector(3, 1, {{1, 3}, {2, 5}});
    PiOracle good = PiOracle::default_ones(v);
    CHECK_NOTHROW(good.validate(v));
    PiOracle bad = good;
    bad.pi0.pop_back();
    CHECK_THROWS_AS(bad.validate(v), domain_error);
    PiOracle bad2 = good;
    bad2.pi0[0] = cx64(0.0, 0.0); // leading coefficient must be invertible
    CHECK_THROWS_AS(bad2.validate(v), domain_error);
}

TEST_CASE("assembled combinations agree with the exact unit-data path") {
    const ZetaVector v = make_zeta_vector(3, 1, {{1, 3}, {2, 5}});
    const PiOracle pi = PiOracle::default_ones(v);
    for (const RationalPoint pt : {RationalPoint(0, 1), RationalPoint(1, 2)}) {
        CHECK(std::abs(b_n_at_root<cx64>(v, pt, pi, ctx()) -
                       b_n_at_root_exact_unitpi(v, pt).to_complex<cx64>()) < 1e-12);
        CHECK(std::abs(B_plus_at_root<cx64>(v, pt, pi, ctx()) -
                       B_plus_at_root_exact_unitpi(v, pt).to_complex<cx64>()) < 1e-12);
        CHECK(std::abs(script_A_at_root<cx64>(v, pt, pi, ctx()) -
                       script_A_at_root_exact_unitpi(v, pt).to_complex<cx64>()) < 1e-12);
        CHECK(std::abs(script_H_at_root<cx64>(v, pt, pi, ctx()) -
                       script_H_at_root_exact_unitpi(v, pt).to_complex<cx64>()) < 1e-12);
    }
}

TEST_CASE("assembly identities with unit data") {
    const ZetaVector v = make_zeta_vector(2, 1, {{1, 3}});
    const PiOracle pi = PiOracle::default_ones(v);
    const RationalPoint pt(1, 4);
    const double pival = 3.14159265358979323846;
    const cx64 bp = B_plus_at_root<cx64>(v, pt, pi, ctx());
    CHECK(std::abs(bp - (rn_at_root<cx64>(v, pt, ctx()) + b_n_at_root<cx64>(v, pt, pi, ctx()))) <
          1e-12);
    const cx64 pref = std::exp(cx64(0.0, -2.0 * pival) * (0.25 / 24.0));
    CHECK(std::abs(script_H_at_root<cx64>(v, pt, pi, ctx()) -
                   (pref * bp - script_A_at_root<cx64>(v, pt, pi, ctx()))) < 1e-12);
}
