#pragma once

// Core domain types:
//
//  RootOfUnity      e(alpha/beta), with the (alpha, beta) pair stored verbatim
//                   so that half-integer powers x^{m/2} := e(m alpha / (2 beta))
//                   are well defined (they depend on the representative);
//  ZetaVector       the argument vector: N leading entries doubled, the rest
//                   appearing once, n arguments in total after expansion;
//  RationalPoint    a reduced rational h/k, k >= 1;
//  UnimodularMatrix an element of SL_2(Z) with checked arithmetic;
//  GroupWord        a word in the generators S_ell = (1 0; ell 1) and
//                   T = (1 1; 0 1);
//
// plus the level ell of a vector, the quantum-set membership predicate, the
// eta-function multiplier system, Moebius action, and JSON (de)serialization.

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qmrank/errors.hpp"
#include "qmrank/numeric.hpp"
#include "qmrank/rational.hpp"

namespace qmrank {

// --------------------------------------------------------------------------
// Kronecker symbol (a | n), the full extension of the Jacobi symbol:
// multiplicative in n, (a | 2) from a mod 8, (a | -1) = sign conventions,
// and (0 | 1) = 1.
int kronecker_symbol(std::int64_t a, std::int64_t n);

// --------------------------------------------------------------------------
struct RootOfUnity {
    // Value e(alpha/beta).  beta >= 1.  The pair is stored as given (after
    // sign normalization of beta) and is NOT reduced here; validation of
    // gcd-reduction happens where vectors are built.
    std::int64_t alpha = 0;
    std::int64_t beta = 1;

    RootOfUnity() = default;
    RootOfUnity(std::int64_t a, std::int64_t b) : alpha(a), beta(b) {
        if (beta == 0) throw domain_error("RootOfUnity: beta must be nonzero");
        if (beta < 0) { alpha = checked_sub(0, alpha); beta = checked_sub(0, beta); }
    }

    // e(m * alpha / (d * beta)); m/d = 1 gives the value itself, (3,2) gives
    // the half-integer power x^{3/2} on the stored representative, etc.
    template <class C> C power(std::int64_t m = 1, std::int64_t d = 1) const {
        using R = real_of<C>;
        const R x = (R(m) * R(alpha)) / (R(d) * R(beta));
        return e_of_real<C>(x);
    }

    cx64 value() const { return power<cx64>(); }

    Rational exponent() const { return Rational(alpha, beta); } // reduced copy
};

// --------------------------------------------------------------------------
struct ZetaVector {
    int n = 0; // number of arguments after expansion
    int N = 0; // number of leading fractions that appear doubled
    std::vector<RootOfUnity> fractions; // distinct entries, size n - N

    // The n-entry argument list: first N fractions doubled, the rest single.
    std::vector<RootOfUnity> expanded() const {
        std::vector<RootOfUnity> out;
        out.reserve(static_cast<std::size_t>(n));
        for (int j = 0; j < N; ++j) { out.push_back(fractions[j]); out.push_back(fractions[j]); }
        for (std::size_t j = N; j < fractions.size(); ++j) out.push_back(fractions[j]);
        return out;
    }
};

// Validates and builds a vector:
//   n >= 2, 0 <= 2N <= n, fractions.size() == n - N;
//   each (alpha, beta): beta >= 1, gcd(|alpha|, beta) == 1, beta does not
//   divide 2*alpha (so the root is not +-1);
//   for r != s, alpha_r/beta_r +- alpha_s/beta_s is never an integer.
ZetaVector make_zeta_vector(int n, int N,
                            const std::vector<std::pair<std::int64_t, std::int64_t>>& fractions);

// ell = 6 lcm(beta_1..beta_n)^2, halved to 2 lcm^2 when some beta_j is
// divisible by 3.
std::int64_t level_ell(const ZetaVector& v);

// --------------------------------------------------------------------------
struct RationalPoint {
    // h/k in lowest terms, k >= 1.
    std::int64_t h = 0;
    std::int64_t k = 1;

    RationalPoint() = default;
    RationalPoint(std::int64_t hh, std::int64_t kk);

    Rational to_rational() const { return Rational(h, k); }
    double to_double() const { return static_cast<double>(h) / static_cast<double>(k); }
    std::string str() const { return std::to_string(h) + "/" + std::to_string(k); }

    static RationalPoint parse(const std::string& text);

    friend bool operator==(const RationalPoint& a, const RationalPoint& b) {
        return a.h == b.h && a.k == b.k;
    }
};

// Membership of h/k in the quantum set of the vector: for every fraction,
// beta_j does not divide k and the distance from k*alpha_j/beta_j to its
// nearest integer exceeds 1/6.  Exact integer arithmetic throughout.
bool is_quantum_point(const ZetaVector& v, const RationalPoint& x);

// All quantum points h/k with 1 <= k <= kmax, 0 <= h < k, gcd(h, k) = 1,
// plus their negatives -h/k and integer translates are quantum as well; the
// enumeration returns the canonical window [0, 1).
std::vector<RationalPoint> quantum_points_upto(const ZetaVector& v, std::int64_t kmax);

// --------------------------------------------------------------------------
struct UnimodularMatrix {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    UnimodularMatrix() = default;
    UnimodularMatrix(std::int64_t aa, std::int64_t bb, std::int64_t cc, std::int64_t dd)
        : a(aa), b(bb), c(cc), d(dd) {
        if (checked_sub(checked_mul(a, d), checked_mul(b, c)) != 1)
            throw domain_error("UnimodularMatrix: determinant must be 1");
    }

    friend UnimodularMatrix operator*(const UnimodularMatrix& x, const UnimodularMatrix& y) {
        return UnimodularMatrix(
            checked_add(checked_mul(x.a, y.a), checked_mul(x.b, y.c)),
            checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.d)),
            checked_add(checked_mul(x.c, y.a), checked_mul(x.d, y.c)),
            checked_add(checked_mul(x.c, y.b), checked_mul(x.d, y.d)));
    }

    UnimodularMatrix inverse() const { return UnimodularMatrix(d, -b, -c, a); }

    static UnimodularMatrix T() { return UnimodularMatrix(1, 1, 0, 1); }
    static UnimodularMatrix S_ell(std::int64_t ell) { return UnimodularMatrix(1, 0, ell, 1); }

    // Integer power (negative = power of the inverse).
    UnimodularMatrix pow(std::int64_t e) const;
};

// Moebius action (a tau + b) / (c tau + d).
template <class C> C mobius_apply(const UnimodularMatrix& g, const C& tau) {
    using R = real_of<C>;
    const C den = C(R(g.c)) * tau + C(R(g.d));
    using std::abs;
    if (abs(den) < R(1e-300)) throw domain_error("mobius_apply: pole of the action");
    return (C(R(g.a)) * tau + C(R(g.b))) / den;
}

// Exact action on rationals; throws when c x + d = 0.
Rational mobius_apply(const UnimodularMatrix& g, const Rational& x);
RationalPoint mobius_apply(const UnimodularMatrix& g, const RationalPoint& x);

// --------------------------------------------------------------------------
struct GroupWord {
    // Word prod_i gen_i^{power_i} in S_ell and T, leftmost factor first.
    enum class Gen { S, T };
    struct Letter { Gen gen; std::int64_t power; };
    std::vector<Letter> letters;

    UnimodularMatrix to_matrix(std::int64_t ell) const;
};

// --------------------------------------------------------------------------
// Multiplier system of the eta function: eta(g tau) = chi(g) sqrt(c tau + d) eta(tau)
// with the principal square root.  chi(g) is a 24th root of unity returned as
// its exact exponent r (chi = e(r)), normalized to [0, 1).
Rational eta_multiplier_exponent(const UnimodularMatrix& g);
cx64 eta_multiplier(const UnimodularMatrix& g);

} // namespace qmrank
