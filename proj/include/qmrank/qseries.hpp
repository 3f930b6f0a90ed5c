#pragma once

// Formal q-expansions.
//
//  PowerSeriesT<C>  truncated series sum c_r q^r, complex coefficients;
//  WPolynomial      Laurent polynomial in w with exact 64-bit coefficients;
//  WqSeries         q-series whose coefficients are WPolynomials — the exact
//                   path used for coefficient-identity tests;
//  RankTable        N(m, r) = number of partitions of r with rank m, by
//                   direct enumeration (largest part minus number of parts);
//  r1_series        sum_{n >= 0} q^{n^2} / ((w q; q)_n (w^{-1} q; q)_n);
//  rn_series        the n >= 2 multisum with argument list x_1..x_n;
//  eta_series       Euler product prod (1 - q^k) as a pentagonal-number
//                   series, with the q^{1/24} prefactor tracked separately.

#include <cstdint>
#include <map>
#include <vector>

#include "qmrank/errors.hpp"
#include "qmrank/numeric.hpp"
#include "qmrank/rational.hpp"

namespace qmrank {

// (a; base)_n = prod_{j=0}^{n-1} (1 - a base^j)
template <class C> C poch_finite(const C& a, const C& base, long n) {
    if (n < 0) throw domain_error("poch_finite: negative length");
    C out = make_cx<C>(1.0);
    C p = a;
    for (long j = 0; j < n; ++j) {
        out *= (make_cx<C>(1.0) - p);
        p *= base;
    }
    return out;
}

// --------------------------------------------------------------------------
template <class C> struct PowerSeriesT {
    // c[r] multiplies q^r; truncation order = c.size() - 1.
    std::vector<C> c;

    PowerSeriesT() = default;
    explicit PowerSeriesT(int order) : c(static_cast<std::size_t>(order) + 1, make_cx<C>(0.0)) {
        if (order < 0) throw domain_error("PowerSeriesT: negative order");
    }

    int order() const { return static_cast<int>(c.size()) - 1; }

    friend PowerSeriesT operator+(const PowerSeriesT& a, const PowerSeriesT& b) {
        PowerSeriesT out(std::min(a.order(), b.order()));
        for (int r = 0; r <= out.order(); ++r) out.c[r] = a.c[r] + b.c[r];
        return out;
    }

    friend PowerSeriesT operator*(const PowerSeriesT& a, const PowerSeriesT& b) {
        PowerSeriesT out(std::min(a.order(), b.order()));
        for (int i = 0; i <= out.order(); ++i) {
            if (a.c[i] == make_cx<C>(0.0)) continue;
            for (int j = 0; i + j <= out.order(); ++j) out.c[i + j] += a.c[i] * b.c[j];
        }
        return out;
    }

    // 1 / this, requiring a unit constant term.
    PowerSeriesT reciprocal() const {
        using std::abs;
        if (abs(c[0]) == 0) throw domain_error("PowerSeriesT: reciprocal of series with zero constant term");
        PowerSeriesT out(order());
        out.c[0] = make_cx<C>(1.0) / c[0];
        for (int r = 1; r <= order(); ++r) {
            C acc = make_cx<C>(0.0);
            for (int j = 1; j <= r; ++j) acc += c[j] * out.c[r - j];
            out.c[r] = -acc / c[0];
        }
        return out;
    }

    // In-place multiplication by the geometric series 1/(1 - x q^step):
    // out[r] = in[r] + x * out[r - step].
    void mul_geometric(const C& x, int step) {
        if (step <= 0) throw domain_error("PowerSeriesT: geometric step must be positive");
        for (int r = step; r <= order(); ++r) c[r] += x * c[r - step];
    }

    // In-place multiplication by the linear factor (1 - x q^step).
    void mul_linear(const C& x, int step) {
        if (step <= 0) throw domain_error("PowerSeriesT: linear step must be positive");
        for (int r = order(); r >= step; --r) c[r] -= x * c[r - step];
    }
};

using PowerSeries = PowerSeriesT<cx64>;

// --------------------------------------------------------------------------
// Exact Laurent polynomial in w.
struct WPolynomial {
    int min_exp = 0;                    // exponent carried by coef[0]
    std::vector<std::int64_t> coef;     // empty <=> zero polynomial

    std::int64_t coefficient(int e) const {
        const int i = e - min_exp;
        if (i < 0 || i >= static_cast<int>(coef.size())) return 0;
        return coef[static_cast<std::size_t>(i)];
    }

    void add_term(int e, std::int64_t v);
    void trim();
    bool is_zero() const { return coef.empty(); }

    friend WPolynomial operator+(const WPolynomial& a, const WPolynomial& b);
    // this += w^shift * other
    void add_shifted(const WPolynomial& other, int shift);

    // Evaluate at a complex w != 0.
    template <class C> C eval(const C& w) const {
        C out = make_cx<C>(0.0);
        if (coef.empty()) return out;
        // Horner in ascending powers, then multiply by w^{min_exp}.
        for (std::size_t i = coef.size(); i-- > 0;)
            out = out * w + make_cx<C>(static_cast<double>(coef[i]));
        C shift = make_cx<C>(1.0);
        const C winv = make_cx<C>(1.0) / w;
        for (int j = 0; j < (min_exp >= 0 ? min_exp : -min_exp); ++j)
            shift *= (min_exp >= 0 ? w : winv);
        return out * shift;
    }
};

// Exact q-series with WPolynomial coefficients.
struct WqSeries {
    std::vector<WPolynomial> c; // c[r] multiplies q^r

    explicit WqSeries(int order = 0) : c(static_cast<std::size_t>(order) + 1) {}
    int order() const { return static_cast<int>(c.size()) - 1; }

    std::int64_t coefficient(int w_exp, int q_exp) const {
        if (q_exp < 0 || q_exp > order()) return 0;
        return c[static_cast<std::size_t>(q_exp)].coefficient(w_exp);
    }

    // In-place multiplication by 1/(1 - w^{wpow} q^{step}).
    void mul_geometric(int wpow, int step);
};

// --------------------------------------------------------------------------
struct RankTable {
    int r = 0;                           // the partitioned integer
    std::map<int, std::int64_t> counts;  // rank m -> N(m, r)

    std::int64_t at(int m) const {
        auto it = counts.find(m);
        return it == counts.end() ? 0 : it->second;
    }
    std::int64_t total() const; // sum over m = p(r)
};

// N(m, r) by direct enumeration of the partitions of r.  Guarded: r <= 60.
RankTable rank_counts(int r);

// --------------------------------------------------------------------------
// n = 1 rank generating function, exact in w:
//   sum_{n >= 0} q^{n^2} prod_{j=1}^{n} 1/(1 - w q^j) 1/(1 - w^{-1} q^j)
WqSeries r1_series_exact(int order);

// Same series at a fixed complex argument w != 0.
template <class C> PowerSeriesT<C> r1_series(const C& w, int order) {
    using std::abs;
    if (abs(w) == 0) throw domain_error("r1_series: w must be nonzero");
    if (order < 0) throw domain_error("r1_series: negative order");
    PowerSeriesT<C> sum(order);
    PowerSeriesT<C> inv(order);
    inv.c[0] = make_cx<C>(1.0); // running 1/((w q; q)_n (w^{-1} q; q)_n)
    const C winv = make_cx<C>(1.0) / w;
    sum.c[0] = make_cx<C>(1.0); // n = 0 term
    for (int n = 1; static_cast<long>(n) * n <= order; ++n) {
        inv.mul_geometric(w, n);
        inv.mul_geometric(winv, n);
        const int off = n * n;
        for (int r = off; r <= order; ++r) sum.c[r] += inv.c[r - off];
    }
    return sum;
}

// --------------------------------------------------------------------------
// n >= 2 multisum over m_1 >= 1, m_2..m_n >= 0:
//
//            q^{(m_1+..+m_n)^2 + (m_1+..+m_{n-1}) + ... + m_1}
//   ---------------------------------------------------------------------
//   (x_1 q; q)_{m_1} (q/x_1; q)_{m_1}
//       prod_{j=2}^{n} (x_j q^{m_1+..+m_{j-1}}; q)_{m_j+1} (q^{m_1+..+m_{j-1}}/x_j; q)_{m_j+1}
//
// x is the EXPANDED argument list (length n).  Throws domain_error if an
// argument is zero or a denominator factor vanishes at a retained order.
template <class C> PowerSeriesT<C> rn_series(const std::vector<C>& x, int order);

// --------------------------------------------------------------------------
struct EtaSeries {
    Rational prefactor_exponent{1, 24};  // the series multiplies q^{1/24}
    std::vector<std::int64_t> coef;      // coef[r] multiplies q^r
};

// prod_{k >= 1} (1 - q^k) via the pentagonal-number expansion
// sum_{j in Z} (-1)^j q^{j(3j-1)/2}.
EtaSeries eta_series(int order);

// --------------------------------------------------------------------------
// Implementation of rn_series (kept in the header: template over C).
template <class C> PowerSeriesT<C> rn_series(const std::vector<C>& x, int order) {
    const int n = static_cast<int>(x.size());
    if (n < 2) throw domain_error("rn_series: need at least two arguments");
    if (order < 0) throw domain_error("rn_series: negative order");
    using std::abs;
    for (int j = 0; j < n; ++j)
        if (abs(x[j]) == 0) throw domain_error("rn_series: argument x_" + std::to_string(j + 1) + " is zero");

    PowerSeriesT<C> total(order);

    // Exponent of q for a tuple: (sum m)^2 + sum of the first n-1 prefixes.
    // Recursive enumeration over m_1 >= 1, m_j >= 0 (j >= 2), pruned by the
    // cheapest lower bound (sum m)^2 + m_1 <= order.
    std::vector<long> m(static_cast<std::size_t>(n), 0);

    // denominator polynomial assembled per tuple
    auto denominator = [&](long, const std::vector<long>& mm, int room) {
        PowerSeriesT<C> d(room);
        d.c[0] = make_cx<C>(1.0);
        // j = 1 block: (x_1 q; q)_{m_1} (q/x_1; q)_{m_1}
        const C x1inv = make_cx<C>(1.0) / x[0];
        for (long i = 1; i <= mm[0]; ++i) {
            if (i > room) break; // higher factors do not touch retained orders
            d.mul_linear(x[0], static_cast<int>(i));
            d.mul_linear(x1inv, static_cast<int>(i));
        }
        long prefix = mm[0];
        for (int j = 1; j < n; ++j) {
            const C xjinv = make_cx<C>(1.0) / x[static_cast<std::size_t>(j)];
            for (long i = 0; i <= mm[static_cast<std::size_t>(j)]; ++i) {
                const long t = prefix + i;
                if (t == 0)
                    throw domain_error("rn_series: denominator factor at q^0 for j=" + std::to_string(j + 1));
                if (t > room) break;
                d.mul_linear(x[static_cast<std::size_t>(j)], static_cast<int>(t));
                d.mul_linear(xjinv, static_cast<int>(t));
            }
            prefix += mm[static_cast<std::size_t>(j)];
        }
        return d;
    };

    // Exponent for the current tuple.
    auto exponent = [&]() {
        long s = 0, e = 0;
        for (int j = 0; j < n; ++j) s += m[static_cast<std::size_t>(j)];
        e = s * s;
        long prefix = 0;
        for (int j = 0; j < n - 1; ++j) {
            prefix += m[static_cast<std::size_t>(j)];
            e += prefix;
        }
        return e;
    };

    // Depth-first walk over tuples.
    auto walk = [&](auto&& self, int level) -> void {
        if (level == n) {
            const long e = exponent();
            if (e > order) return;
            const int room = order - static_cast<int>(e);
            PowerSeriesT<C> inv = denominator(e, m, room).reciprocal();
            for (int r = 0; r <= room; ++r) total.c[static_cast<std::size_t>(r + e)] += inv.c[static_cast<std::size_t>(r)];
            return;
        }
        const long lo = (level == 0) ? 1 : 0;
        for (long v = lo;; ++v) {
            m[static_cast<std::size_t>(level)] = v;
            // cheapest bound: (sum so far)^2 + m_1 <= order
            long s = 0;
            for (int j = 0; j <= level; ++j) s += m[static_cast<std::size_t>(j)];
            if (s * s + m[0] > order) break;
            self(self, level + 1);
        }
        m[static_cast<std::size_t>(level)] = 0;
    };
    walk(walk, 0);
    return total;
}

} // namespace qmrank
