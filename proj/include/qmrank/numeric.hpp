#pragma once

// Scalar machinery shared by the numeric kernels.
//
// Every kernel is a template over the complex scalar type C.  Two
// instantiations are supported and tested:
//
//   cx64 = std::complex<double>                      (~16 decimal digits)
//   cx50 = boost::multiprecision::cpp_complex_50     (50 decimal digits)
//
// The 50-digit type exists so that any verified conclusion can be re-checked
// at (more than) doubled working precision without touching kernel code.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "qmrank/errors.hpp"

namespace qmrank {

using cx64 = std::complex<double>;
using real50 = boost::multiprecision::cpp_bin_float_50;
using cx50 = boost::multiprecision::cpp_complex_50;

// Guard-digit type for finite root-of-unity sums whose terms cancel by a
// factor growing exponentially with the denominator (about 0.12 decimal
// digits per unit of k); not a general kernel instantiation.
using real100 = boost::multiprecision::cpp_bin_float_100;
using cx100 = boost::multiprecision::cpp_complex_100;

template <class C> struct scalar_traits;

template <> struct scalar_traits<cx64> {
    using real_type = double;
    static constexpr int digits10 = 15;
};

template <> struct scalar_traits<cx50> {
    using real_type = real50;
    static constexpr int digits10 = 50;
};

template <> struct scalar_traits<cx100> {
    using real_type = real100;
    static constexpr int digits10 = 100;
};

template <class C> using real_of = typename scalar_traits<C>::real_type;

template <class R> inline R pi_v() { return boost::math::constants::pi<R>(); }

template <class C> inline C make_cx(double re, double im = 0.0) {
    using R = real_of<C>;
    return C(R(re), R(im));
}

template <class C> inline C iu() { return C(real_of<C>(0), real_of<C>(1)); }

// e(z) = exp(2 pi i z) for complex z.
template <class C> inline C e_of(const C& z) {
    using R = real_of<C>;
    const R two_pi = 2 * pi_v<R>();
    using std::exp;
    return exp(C(-two_pi * z.imag(), two_pi * z.real()));
}

// e(x) = exp(2 pi i x) for real x.
template <class C> inline C e_of_real(const real_of<C>& x) {
    using R = real_of<C>;
    const R two_pi = 2 * pi_v<R>();
    using std::cos;
    using std::sin;
    return C(cos(two_pi * x), sin(two_pi * x));
}

// Principal q-power convention: q^s := e^{2 pi i s tau}, entire in tau.
// Never computed as pow(q, s); the exponent is combined first.
template <class C> inline C qpow(const C& tau, const real_of<C>& s) {
    return e_of(C(tau.real() * s, tau.imag() * s));
}

// erfc on the real scalar (used by the nonholomorphic R-kernel weights).
inline double erfc_r(double x) { return boost::math::erfc(x); }
inline real50 erfc_r(const real50& x) { return boost::math::erfc(x); }
inline double erf_r(double x) { return boost::math::erf(x); }
inline real50 erf_r(const real50& x) { return boost::math::erf(x); }

// Accuracy contract for a kernel evaluation.
//
//  target_abs_err  absolute error budget for one kernel value;
//  working_digits  selects the scalar type (<= 16 -> double, else 50-digit);
//  max_terms       hard cap on series terms / quadrature nodes before the
//                  computation is declared inconclusive;
//  min_im_tau      Mordell-integral oscillation guard: below this Im tau the
//                  real-line quadrature refuses to run.
struct PrecisionContext {
    double target_abs_err = 1e-12;
    int working_digits = 16;
    long max_terms = 8'000'000;
    double min_im_tau = 0.05;

    // Working precision must leave ~4 guard digits above the target, and only
    // the two compiled precisions are available.
    void validate() const {
        if (working_digits < 10 || working_digits > 50)
            throw domain_error("PrecisionContext: working_digits must lie in [10, 50]");
        if (target_abs_err <= 0)
            throw domain_error("PrecisionContext: target_abs_err must be positive");
        const double floor_err = std::pow(10.0, -(working_digits - 4));
        if (target_abs_err < floor_err)
            throw domain_error("PrecisionContext: target_abs_err below what working_digits can carry");
        if (max_terms < 1000)
            throw domain_error("PrecisionContext: max_terms too small to be useful");
    }

    bool use_double() const { return working_digits <= 16; }

    // A context with the same targets but tightened for internal sub-steps.
    PrecisionContext tightened(double factor = 0.1) const {
        PrecisionContext c = *this;
        c.target_abs_err *= factor;
        return c;
    }
};

} // namespace qmrank
