#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "qmrank/core.hpp"

using namespace qmrank;

TEST_CASE("rational arithmetic reduces and guards") {
    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK(Rational(-6, -4) == Rational(3, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(1, 3) - Rational(1, 3)) == Rational(0));
    CHECK((Rational(2, 3) * Rational(9, 4)) == Rational(3, 2));
    CHECK((Rational(1, 2) / Rational(3, 2)) == Rational(1, 3));
    CHECK(Rational(7, 2).str() == "7/2");
    CHECK(Rational(-4, 2).str() == "-2");
    CHECK_THROWS_AS(Rational(1, 0), domain_error);
    CHECK(nearest_integer(Rational(3, 2)) == 2);  // ties round up
    CHECK(nearest_integer(Rational(-3, 2)) == -1);
    CHECK(nearest_integer(Rational(2, 5)) == 0);
    CHECK(nearest_integer(Rational(3, 5)) == 1);
}

TEST_CASE("root of unity reduction and powers") {
    const RootOfUnity x(7, 5); // 7/5 == 2/5 mod 1 after canonicalization? stored reduced
    CHECK(x.beta == 5);
    const RootOfUnity y(1, 3);
    const cx64 z = y.power<cx64>(1, 1);
    CHECK(std::abs(z - std::polar(1.0, 2.0 * 3.14159265358979323846 / 3.0)) < 1e-14);
    // half powers live on the stored representative
    const cx64 h = y.power<cx64>(1, 2);
    CHECK(std::abs(h * h - z) < 1e-14);
    const cx64 inv = y.power<cx64>(-1, 1);
    CHECK(std::abs(z * inv - 1.0) < 1e-14);
}

TEST_CASE("zeta vector validation") {
    CHECK_NOTHROW(make_zeta_vector(2, 1, {{1, 3}}));
    CHECK_NOTHROW(make_zeta_vector(2, 0, {{1, 5}, {2, 5}}));
    CHECK_NOTHROW(make_zeta_vector(3, 1, {{1, 3}, {2, 5}}));
    // n must be at least 2
    CHECK_THROWS_AS(make_zeta_vector(1, 0, {{1, 3}}), domain_error);
    // the root may not be +-1: beta | 2 alpha
    CHECK_THROWS_AS(make_zeta_vector(2, 1, {{1, 2}}), domain_error);
    CHECK_THROWS_AS(make_zeta_vector(2, 1, {{1, 1}}), domain_error);
    // pairwise sums/differences may not be integers
    CHECK_THROWS_AS(make_zeta_vector(2, 0, {{1, 3}, {2, 3}}), domain_error);  // 1/3 + 2/3 = 1
    CHECK_THROWS_AS(make_zeta_vector(2, 0, {{1, 4}, {3, 4}}), domain_error);  // 1/4 + 3/4 = 1
    CHECK_THROWS_AS(make_zeta_vector(2, 0, {{1, 3}, {1, 3}}), domain_error);  // difference 0
    // wrong fraction count for (n, N)
    CHECK_THROWS_AS(make_zeta_vector(3, 1, {{1, 3}}), domain_error);

    const ZetaVector v = make_zeta_vector(3, 1, {{1, 3}, {2, 5}});
    const auto ex = v.expanded();
    REQUIRE(ex.size() == 3);
    CHECK(ex[0].beta == 3);
    CHECK(ex[1].beta == 3);
    CHECK(ex[2].beta == 5);
}

TEST_CASE("level of the stabilizing generator") {
    CHECK(level_ell(make_zeta_vector(2, 1, {{1, 3}})) == 18);
    CHECK(level_ell(make_zeta_vector(2, 1, {{1, 5}})) == 150);
    CHECK(level_ell(make_zeta_vector(2, 0, {{1, 5}, {2, 5}})) == 150);
    CHECK(level_ell(make_zeta_vector(3, 1, {{1, 3}, {2, 5}})) == 450);
}

TEST_CASE("quantum set membership") {
    const ZetaVector v3 = make_zeta_vector(2, 1, {{1, 3}});
    // beta = 3: every reduced h/k with 3 not dividing k qualifies
    CHECK(is_quantum_point(v3, RationalPoint(0, 1)));
    CHECK(is_quantum_point(v3, RationalPoint(1, 2)));
    CHECK(is_quantum_point(v3, RationalPoint(3, 4)));
    CHECK_FALSE(is_quantum_point(v3, RationalPoint(1, 3)));
    CHECK_FALSE(is_quantum_point(v3, RationalPoint(2, 9)));

    // beta = 7 needs the residue to stay away from the edge sixth
    const ZetaVector v7 = make_zeta_vector(2, 1, {{1, 7}});
    CHECK(is_quantum_point(v7, RationalPoint(1, 2)));      // t = 2
    CHECK(is_quantum_point(v7, RationalPoint(1, 3)));      // t = 3
    CHECK_FALSE(is_quantum_point(v7, RationalPoint(0, 1)));  // t = 1: 6 < 7
    CHECK_FALSE(is_quantum_point(v7, RationalPoint(1, 6)));  // t = 6: min is 1
    CHECK_FALSE(is_quantum_point(v7, RationalPoint(1, 7)));  // 7 | k

    const auto pts = quantum_points_upto(v3, 5);
    for (const auto& p : pts) CHECK(p.k % 3 != 0);
    CHECK(!pts.empty());
}

TEST_CASE("quantum set is closed under the two generators") {
    const ZetaVector v = make_zeta_vector(2, 1, {{1, 3}});
    const std::int64_t ell = level_ell(v);
    const RationalPoint p(1, 2);
    const RationalPoint tp = mobius_apply(UnimodularMatrix::T(), p);
    CHECK(tp == RationalPoint(3, 2));
    CHECK(is_quantum_point(v, tp));
    const RationalPoint sp = mobius_apply(UnimodularMatrix::S_ell(ell), p);
    CHECK(sp == RationalPoint(1, 20));
    CHECK(is_quantum_point(v, sp));
}

TEST_CASE("unimodular matrices") {
    CHECK_THROWS_AS(UnimodularMatrix(1, 1, 1, 1), domain_error); // det 0
    const UnimodularMatrix t = UnimodularMatrix::T();
    const UnimodularMatrix s = UnimodularMatrix::S_ell(18);
    const UnimodularMatrix w = t * s;
    CHECK(w.a == 19);
    CHECK(w.b == 1);
    CHECK(w.c == 18);
    CHECK(w.d == 1);
    const UnimodularMatrix id = w * w.inverse();
    CHECK(id.a == 1);
    CHECK(id.b == 0);
    CHECK(id.c == 0);
    CHECK(id.d == 1);
    const UnimodularMatrix t3 = t.pow(3);
    CHECK(t3.b == 3);
    const UnimodularMatrix tm2 = t.pow(-2);
    CHECK(tm2.b == -2);

    const cx64 tau(0.3, 1.1);
    const cx64 img = mobius_apply(s, tau);
    const cx64 expect = tau / (18.0 * tau + 1.0);
    CHECK(std::abs(img - expect) < 1e-15);
}

TEST_CASE("rational point parsing") {
    CHECK(RationalPoint::parse("3/7") == RationalPoint(3, 7));
    CHECK(RationalPoint::parse("0") == RationalPoint(0, 1));
    CHECK(RationalPoint::parse("-2/4") == RationalPoint(-1, 2));
    CHECK_THROWS_AS(RationalPoint::parse("1/0"), domain_error);
    CHECK_THROWS_AS(RationalPoint::parse("x"), domain_error);
}

TEST_CASE("eta multiplier on the generators") {
    // tau + 1 multiplies eta by e^{pi i/12}
    const cx64 chi_t = eta_multiplier(UnimodularMatrix::T());
    CHECK(std::abs(chi_t - std::polar(1.0, 3.14159265358979323846 / 12.0)) < 1e-12);
    // -1/tau: eta(-1/tau) = sqrt(-i tau) eta(tau), so relative to the
    // principal sqrt(c tau + d) the constant is e^{-pi i/4}
    const UnimodularMatrix s(0, -1, 1, 0);
    const cx64 chi_s = eta_multiplier(s);
    CHECK(std::abs(chi_s - std::polar(1.0, -3.14159265358979323846 / 4.0)) < 1e-12);
}
