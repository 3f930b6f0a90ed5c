#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_m) and exact finite-sum
// evaluation at roots of unity.
//
// A CyclotomicNumber is a rational-coefficient vector against the power
// basis 1, z, ..., z^{phi(m)-1}, kept reduced modulo the m-th cyclotomic
// polynomial.  Sums, products and inverses are exact; inverses of the
// ubiquitous factors (1 - z^e) use the closed form
//     (1 - z^e)^{-1} = (1/d) sum_{j=0}^{d-2} (d-1-j) z^{e j},   d = ord(z^e),
// while general inverses run the extended Euclidean algorithm against the
// cyclotomic polynomial.
//
// The *_exact evaluators mirror the floating versions in rooteval.hpp on
// the field Q(zeta_M) of smallest sufficient modulus; where the externally
// supplied Pi-data would enter they fix the unit oracle (Pi = 1, Pi' = 0),
// which is the only case an exact carrier makes sense for.  Moduli are
// capped at 840; beyond that the evaluators throw domain_error and callers
// fall back to the floating path.

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qmrank/core.hpp"
#include "qmrank/errors.hpp"
#include "qmrank/numeric.hpp"

namespace qmrank {

using bigq = boost::multiprecision::cpp_rational;

// Euler phi and the m-th cyclotomic polynomial (monic, ascending, exact
// integer coefficients).  m is capped at 840.
long euler_phi(long m);
const std::vector<std::int64_t>& cyclotomic_polynomial(long m);

struct CyclotomicNumber {
    long m = 1;
    std::vector<bigq> c; // size phi(m); coefficient of z^i at index i

    bool is_zero() const;
    bool is_rational() const;
    bigq rational_part() const; // requires is_rational()
    std::string str() const;

    CyclotomicNumber operator-() const;
    CyclotomicNumber& operator+=(const CyclotomicNumber& o);
    CyclotomicNumber& operator-=(const CyclotomicNumber& o);
    CyclotomicNumber& operator*=(const CyclotomicNumber& o);
    CyclotomicNumber& operator*=(const bigq& s);

    // multiplicative inverse (extended Euclid against the cyclotomic
    // polynomial); throws domain_error on zero
    CyclotomicNumber inverse() const;

    // the same number viewed in Q(zeta_M), m | M
    CyclotomicNumber promoted(long M) const;

    template <class C> C to_complex() const {
        using R = real_of<C>;
        C out = C(R(0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            const R coef = c[i].template convert_to<R>();
            out += C(coef) * e_of_real<C>(R(static_cast<long>(i)) / R(m));
        }
        return out;
    }
};

CyclotomicNumber operator+(CyclotomicNumber a, const CyclotomicNumber& b);
CyclotomicNumber operator-(CyclotomicNumber a, const CyclotomicNumber& b);
CyclotomicNumber operator*(CyclotomicNumber a, const CyclotomicNumber& b);
CyclotomicNumber operator*(CyclotomicNumber a, const bigq& s);
bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b);
bool operator!=(const CyclotomicNumber& a, const CyclotomicNumber& b);

CyclotomicNumber cyc_zero(long m);
CyclotomicNumber cyc_rational(long m, const bigq& v);
// z^e in Q(zeta_m), any integer e
CyclotomicNumber root_power(long m, std::int64_t e);
// (1 - z^e)^{-1}; throws domain_error when e = 0 mod m
CyclotomicNumber one_minus_root_inverse(long m, std::int64_t e);

// --------------------------------------------------------------------------
// Exact finite evaluations.  Gate: the exact path is intended for
// k * lcm(beta_j) <= 360 (the CLI uses this switch); the evaluators
// themselves only require their field modulus to stay within the cap.
bool exact_path_available(const ZetaVector& v, const RationalPoint& pt);

CyclotomicNumber r1_at_root_exact(const RootOfUnity& x, const RationalPoint& pt);
CyclotomicNumber rn_at_root_exact(const ZetaVector& v, const RationalPoint& pt);
CyclotomicNumber ap_at_root_exact(const RootOfUnity& x, const RationalPoint& pt);

// unit-oracle variants (Pi_j(0) = Pi_j^dag = 1, Pi_j'(0) = 0)
CyclotomicNumber b_n_at_root_exact_unitpi(const ZetaVector& v, const RationalPoint& pt);
CyclotomicNumber B_plus_at_root_exact_unitpi(const ZetaVector& v, const RationalPoint& pt);
CyclotomicNumber script_A_at_root_exact_unitpi(const ZetaVector& v, const RationalPoint& pt);
CyclotomicNumber script_H_at_root_exact_unitpi(const ZetaVector& v, const RationalPoint& pt);

} // namespace qmrank
