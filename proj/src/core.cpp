#include "qmrank/core.hpp"

#include <algorithm>
#include <numeric>

namespace qmrank {

// --------------------------------------------------------------------------
// Kronecker symbol, following the classical binary algorithm.  (a | 2) is
// read off a mod 8; reciprocity uses the two's-complement trick (a & n & 2)
// which is valid for negative odd a as well.
int kronecker_symbol(std::int64_t a, std::int64_t n) {
    static const int mod8_table[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if (a % 2 == 0 && n % 2 == 0) return 0;

    int v = 0;
    while (n % 2 == 0) { n /= 2; ++v; }
    int k = (v % 2 == 0) ? 1 : mod8_table[((a % 8) + 8) % 8];
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    // n is odd and positive now, so (. | n) is a character mod n: reduce a.
    a = ((a % n) + n) % n;
    while (a != 0) {
        v = 0;
        while (a % 2 == 0) { a /= 2; ++v; }
        if (v % 2 == 1) k *= mod8_table[n % 8];
        if ((a & n & 2) != 0) k = -k; // reciprocity: both odd, both = 3 (mod 4)
        const std::int64_t t = n % a; // in [0, a)
        n = a;
        a = t;
    }
    return (n > 1) ? 0 : k;
}

// --------------------------------------------------------------------------
ZetaVector make_zeta_vector(int n, int N,
                            const std::vector<std::pair<std::int64_t, std::int64_t>>& fractions) {
    if (n < 2) throw domain_error("make_zeta_vector: n must be at least 2");
    if (N < 0 || 2 * N > n) throw domain_error("make_zeta_vector: need 0 <= 2N <= n");
    if (fractions.size() != static_cast<std::size_t>(n - N))
        throw domain_error("make_zeta_vector: expected n - N fractions, got " +
                           std::to_string(fractions.size()));

    ZetaVector v;
    v.n = n;
    v.N = N;
    v.fractions.reserve(fractions.size());
    for (const auto& [a0, b0] : fractions) {
        RootOfUnity r(a0, b0); // normalizes beta >= 1
        const std::int64_t aa = r.alpha < 0 ? -r.alpha : r.alpha;
        if (std::gcd(aa, r.beta) != 1)
            throw domain_error("make_zeta_vector: fraction " + std::to_string(r.alpha) + "/" +
                               std::to_string(r.beta) + " is not in lowest terms");
        if ((2 * r.alpha) % r.beta == 0)
            throw domain_error("make_zeta_vector: root e(" + std::to_string(r.alpha) + "/" +
                               std::to_string(r.beta) + ") must not be +-1");
        v.fractions.push_back(r);
    }
    // Pairwise: alpha_r/beta_r +- alpha_s/beta_s must not be an integer.
    for (std::size_t r = 0; r < v.fractions.size(); ++r) {
        for (std::size_t s = r + 1; s < v.fractions.size(); ++s) {
            const Rational xr(v.fractions[r].alpha, v.fractions[r].beta);
            const Rational xs(v.fractions[s].alpha, v.fractions[s].beta);
            if ((xr + xs).is_integer() || (xr - xs).is_integer())
                throw domain_error("make_zeta_vector: fractions " + xr.str() + " and " + xs.str() +
                                   " differ or sum to an integer");
        }
    }
    return v;
}

std::int64_t level_ell(const ZetaVector& v) {
    std::int64_t l = 1;
    bool has_multiple_of_3 = false;
    for (const auto& f : v.fractions) {
        l = std::lcm(l, f.beta);
        if (f.beta % 3 == 0) has_multiple_of_3 = true;
    }
    const std::int64_t l2 = checked_mul(l, l);
    return has_multiple_of_3 ? checked_mul(2, l2) : checked_mul(6, l2);
}

// --------------------------------------------------------------------------
RationalPoint::RationalPoint(std::int64_t hh, std::int64_t kk) : h(hh), k(kk) {
    if (k == 0) throw domain_error("RationalPoint: zero denominator");
    if (k < 0) { h = checked_sub(0, h); k = checked_sub(0, k); }
    std::int64_t g = std::gcd(h < 0 ? -h : h, k);
    if (g > 1) { h /= g; k /= g; }
}

RationalPoint RationalPoint::parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return RationalPoint(std::stoll(text), 1);
        return RationalPoint(std::stoll(text.substr(0, slash)),
                             std::stoll(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw domain_error("RationalPoint: cannot parse '" + text + "' as h/k");
    }
}

bool is_quantum_point(const ZetaVector& v, const RationalPoint& x) {
    for (const auto& f : v.fractions) {
        if (x.k % f.beta == 0) return false;
        // distance from k*alpha/beta to the nearest integer, as 6*min(t, beta-t) vs beta
        const std::int64_t t = ((checked_mul(f.alpha, x.k) % f.beta) + f.beta) % f.beta;
        const std::int64_t m = std::min(t, f.beta - t);
        if (checked_mul(6, m) <= f.beta) return false;
    }
    return true;
}

std::vector<RationalPoint> quantum_points_upto(const ZetaVector& v, std::int64_t kmax) {
    std::vector<RationalPoint> out;
    for (std::int64_t k = 1; k <= kmax; ++k)
        for (std::int64_t h = 0; h < k; ++h) {
            if (std::gcd(h, k) != 1) continue;
            RationalPoint p(h, k);
            if (is_quantum_point(v, p)) out.push_back(p);
        }
    return out;
}

// --------------------------------------------------------------------------
UnimodularMatrix UnimodularMatrix::pow(std::int64_t e) const {
    UnimodularMatrix base = e >= 0 ? *this : inverse();
    std::int64_t m = e >= 0 ? e : -e;
    UnimodularMatrix acc;
    while (m > 0) {
        if (m & 1) acc = acc * base;
        base = base * base;
        m >>= 1;
    }
    return acc;
}

Rational mobius_apply(const UnimodularMatrix& g, const Rational& x) {
    const Rational den = Rational(g.c) * x + Rational(g.d);
    if (den.num == 0) throw domain_error("mobius_apply: rational point maps to infinity");
    return (Rational(g.a) * x + Rational(g.b)) / den;
}

RationalPoint mobius_apply(const UnimodularMatrix& g, const RationalPoint& x) {
    // (a h + b k) / (c h + d k), reduced by the constructor.
    const std::int64_t num = checked_add(checked_mul(g.a, x.h), checked_mul(g.b, x.k));
    const std::int64_t den = checked_add(checked_mul(g.c, x.h), checked_mul(g.d, x.k));
    if (den == 0) throw domain_error("mobius_apply: rational point maps to infinity");
    return RationalPoint(num, den);
}

UnimodularMatrix GroupWord::to_matrix(std::int64_t ell) const {
    UnimodularMatrix m;
    for (const auto& l : letters) {
        const UnimodularMatrix gen =
            (l.gen == Gen::S) ? UnimodularMatrix::S_ell(ell) : UnimodularMatrix::T();
        m = m * gen.pow(l.power);
    }
    return m;
}

// --------------------------------------------------------------------------
// eta multiplier.  For c odd:
//   chi = (d | |c|) e( ((a+d)c - bd(c^2-1) - 3c) / 24 ),
// for c even (d odd):
//   chi = (c | d) e( ((a+d)c - bd(c^2-1) + 3d - 3 - 3cd) / 24 ).
// Matrices with c < 0 (or c = 0, d < 0) are first replaced by their negative,
// which acts identically on the upper half plane.  The principal square root
// then differs by a quarter turn whose sign depends on where c tau + d lies:
// for c < 0 it is in the open lower half plane and sqrt(-(c tau + d)) =
// +i sqrt(c tau + d), while for c = 0, d < 0 it is a negative real (on the
// branch cut, arg = +pi) and sqrt(-(c tau + d)) = -i sqrt(c tau + d).
Rational eta_multiplier_exponent(const UnimodularMatrix& g) {
    std::int64_t a = g.a, b = g.b, c = g.c, d = g.d;
    Rational extra(0);
    if (c < 0 || (c == 0 && d < 0)) {
        extra = c < 0 ? Rational(1, 4) : Rational(-1, 4);
        a = -a; b = -b; c = -c; d = -d;
    }

    const auto i128_mod24 = [](__int128 x) -> std::int64_t {
        auto r = static_cast<std::int64_t>(x % 24);
        return (r % 24 + 24) % 24;
    };

    int kron;
    __int128 e24; // numerator of the exponent, mod 24
    const __int128 A = a, B = b, C = c, D = d;
    if (c % 2 != 0) {
        kron = kronecker_symbol(d, c < 0 ? -c : c);
        e24 = (A + D) * C - B * D * (C * C - 1) - 3 * C;
    } else {
        kron = kronecker_symbol(c, d);
        e24 = (A + D) * C - B * D * (C * C - 1) + 3 * D - 3 - 3 * C * D;
    }
    if (kron == 0) throw domain_error("eta_multiplier: degenerate Kronecker symbol");

    Rational r = Rational(i128_mod24(e24), 24) + extra;
    if (kron == -1) r = r + Rational(1, 2);
    // normalize to [0, 1)
    r = r - Rational(floor_div(r.num, r.den));
    return r;
}

cx64 eta_multiplier(const UnimodularMatrix& g) {
    const Rational r = eta_multiplier_exponent(g);
    return e_of_real<cx64>(r.to_double());
}

} // namespace qmrank
