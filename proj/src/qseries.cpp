#include "qmrank/qseries.hpp"

#include <algorithm>

namespace qmrank {

void WPolynomial::add_term(int e, std::int64_t v) {
    if (v == 0) return;
    if (coef.empty()) {
        min_exp = e;
        coef.push_back(v);
        return;
    }
    if (e < min_exp) {
        coef.insert(coef.begin(), static_cast<std::size_t>(min_exp - e), 0);
        min_exp = e;
    } else if (e > min_exp + static_cast<int>(coef.size()) - 1) {
        coef.resize(static_cast<std::size_t>(e - min_exp) + 1, 0);
    }
    auto& slot = coef[static_cast<std::size_t>(e - min_exp)];
    slot = checked_add(slot, v);
    if (slot == 0) trim();
}

void WPolynomial::trim() {
    std::size_t lo = 0, hi = coef.size();
    while (hi > lo && coef[hi - 1] == 0) --hi;
    while (lo < hi && coef[lo] == 0) ++lo;
    if (lo == hi) {
        coef.clear();
        min_exp = 0;
        return;
    }
    if (lo > 0 || hi < coef.size()) {
        coef = std::vector<std::int64_t>(coef.begin() + static_cast<long>(lo), coef.begin() + static_cast<long>(hi));
        min_exp += static_cast<int>(lo);
    }
}

WPolynomial operator+(const WPolynomial& a, const WPolynomial& b) {
    WPolynomial out = a;
    out.add_shifted(b, 0);
    return out;
}

void WPolynomial::add_shifted(const WPolynomial& other, int shift) {
    for (std::size_t i = 0; i < other.coef.size(); ++i)
        if (other.coef[i] != 0) add_term(other.min_exp + static_cast<int>(i) + shift, other.coef[i]);
}

void WqSeries::mul_geometric(int wpow, int step) {
    if (step <= 0) throw domain_error("WqSeries: geometric step must be positive");
    // c[r] += w^{wpow} * c[r - step]  (in place, ascending r)
    for (int r = step; r <= order(); ++r)
        c[static_cast<std::size_t>(r)].add_shifted(c[static_cast<std::size_t>(r - step)], wpow);
}

std::int64_t RankTable::total() const {
    std::int64_t s = 0;
    for (const auto& kv : counts) s = checked_add(s, kv.second);
    return s;
}

namespace {
// Enumerate partitions of `left` with parts <= `maxpart`, tracking the
// largest part and the number of parts of the full partition being built.
void walk_partitions(int left, int maxpart, int largest, int nparts, RankTable& out) {
    if (left == 0) {
        ++out.counts[largest - nparts];
        return;
    }
    for (int p = std::min(left, maxpart); p >= 1; --p)
        walk_partitions(left - p, p, largest == 0 ? p : largest, nparts + 1, out);
}
} // namespace

RankTable rank_counts(int r) {
    if (r < 0 || r > 60) throw domain_error("rank_counts: r out of range [0, 60]");
    RankTable out;
    out.r = r;
    if (r == 0) {
        out.counts[0] = 1; // the empty partition
        return out;
    }
    walk_partitions(r, r, 0, 0, out);
    return out;
}

WqSeries r1_series_exact(int order) {
    if (order < 0) throw domain_error("r1_series_exact: negative order");
    WqSeries sum(order);
    WqSeries inv(order);
    inv.c[0].add_term(0, 1);
    sum.c[0].add_term(0, 1); // n = 0 term
    for (int n = 1; static_cast<long>(n) * n <= order; ++n) {
        inv.mul_geometric(+1, n);
        inv.mul_geometric(-1, n);
        const int off = n * n;
        for (int r = off; r <= order; ++r)
            sum.c[static_cast<std::size_t>(r)].add_shifted(inv.c[static_cast<std::size_t>(r - off)], 0);
    }
    return sum;
}

EtaSeries eta_series(int order) {
    if (order < 0) throw domain_error("eta_series: negative order");
    EtaSeries out;
    out.coef.assign(static_cast<std::size_t>(order) + 1, 0);
    for (long j = 0;; ++j) {
        const long g1 = j * (3 * j - 1) / 2;  // j and -j pentagonal exponents
        const long g2 = j * (3 * j + 1) / 2;
        if (g1 > order && g2 > order) break;
        const std::int64_t sign = (j % 2 == 0) ? 1 : -1;
        if (g1 <= order) out.coef[static_cast<std::size_t>(g1)] += sign;
        if (g2 <= order && j > 0) out.coef[static_cast<std::size_t>(g2)] += sign;
    }
    return out;
}

} // namespace qmrank
