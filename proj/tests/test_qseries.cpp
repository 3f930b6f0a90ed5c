#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "qmrank/qseries.hpp"

using namespace qmrank;

TEST_CASE("rank counts by direct partition enumeration") {
    // partitions of 4: 4 | 3+1 | 2+2 | 2+1+1 | 1+1+1+1, ranks 3, 1, 0, -1, -3
    const RankTable t4 = rank_counts(4);
    CHECK(t4.at(3) == 1);
    CHECK(t4.at(1) == 1);
    CHECK(t4.at(0) == 1);
    CHECK(t4.at(-1) == 1);
    CHECK(t4.at(-3) == 1);
    CHECK(t4.at(2) == 0);
    CHECK(t4.at(-2) == 0);
    CHECK(t4.total() == 5);

    // symmetry N(m, r) = N(-m, r) and totals = p(r)
    static const std::int64_t pr[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
    for (int r = 0; r <= 10; ++r) {
        const RankTable t = rank_counts(r);
        CHECK(t.total() == pr[r]);
        for (const auto& [m, c] : t.counts) CHECK(t.at(-m) == c);
    }

    const RankTable t0 = rank_counts(0);
    CHECK(t0.at(0) == 1); // the empty partition has rank 0
}

TEST_CASE("exact series matches partition ranks coefficientwise") {
    const WqSeries s = r1_series_exact(10);
    for (int r = 0; r <= 10; ++r) {
        const RankTable t = rank_counts(r);
        for (int m = -10; m <= 10; ++m) CHECK(s.coefficient(m, r) == t.at(m));
    }
    CHECK(s.coefficient(0, 0) == 1);
    CHECK(s.coefficient(2, 3) == 1); // the partition 3 has rank 2
}

TEST_CASE("numeric series agrees with the exact one at a generic w") {
    const int order = 10;
    const WqSeries se = r1_series_exact(order);
    const cx64 w(0.37, -0.22);
    const PowerSeriesT<cx64> sn = r1_series<cx64>(w, order);
    REQUIRE(sn.order() == order);
    for (int r = 0; r <= order; ++r) {
        cx64 ev(0.0, 0.0);
        for (int m = -order; m <= order; ++m) {
            const std::int64_t c = se.coefficient(m, r);
            if (c != 0) ev += static_cast<double>(c) * std::pow(w, m);
        }
        CHECK(std::abs(sn.c[static_cast<std::size_t>(r)] - ev) < 5e-12);
    }
}

TEST_CASE("series input guards") {
    CHECK_THROWS_AS(r1_series<cx64>(cx64(0.0, 0.0), 4), domain_error);
    CHECK_THROWS_AS(r1_series<cx64>(cx64(1.0, 0.0), -1), domain_error);
}

TEST_CASE("power series ring operations") {
    PowerSeriesT<cx64> a(2), b(2);
    a.c = {cx64(1), cx64(1), cx64(0)};  // 1 + q
    b.c = {cx64(1), cx64(-1), cx64(0)}; // 1 - q
    const PowerSeriesT<cx64> p = a * b;  // 1 - q^2
    CHECK(std::abs(p.c[0] - 1.0) < 1e-15);
    CHECK(std::abs(p.c[1]) < 1e-15);
    CHECK(std::abs(p.c[2] + 1.0) < 1e-15);
    const PowerSeriesT<cx64> s = a + b;
    CHECK(std::abs(s.c[0] - 2.0) < 1e-15);
    CHECK(std::abs(s.c[1]) < 1e-15);
}
