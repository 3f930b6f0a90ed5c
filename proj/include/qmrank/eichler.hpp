#pragma once

// Period integrals along vertical lines and everything assembled from them.
//
//  period_integral_g   int_{base}^{i infty} g_{a,b}(scale * rho) / sqrt(-i (rho + tau)) d rho
//  period_integral_dg  the same with the termwise u-derivative integrand
//  H_alpha_beta        sqrt(3) [ -e(-1/6) I_+ + e(1/6) I_- ]  (base 1/ell)
//  Htilde_alpha_beta   sqrt(3) pi i e(2 alpha/beta) [ -e(-1/6) I_+ + 3 e(1/6) I_- ]
//  D_alpha_beta        like H with the derivative integrand
//  E1_err, E2_err      the elementary defect terms of the S_ell laws
//  T1_plus_T2          the two Mordell-type pieces entering the W1 law
//  cocycle_H1_term/Sl  weight-1/2 cocycle: (1/2) e(2a/b) H + zeta_24^{-l} (l x + 1)^{-1/2} E1
//  cocycle_H2_term/Sl  weight-3/2 cocycle (displayed closed form)
//  hminus_h            the tau-domain combination 2 sum c_j S - (1/(2 pi i)) sum c_j dS
//
// The vertical integrals converge at both ends: Gaussian decay toward
// i infty, and super-exponential flattening into the rational base point.
// Close to the base the integrand can spike at the scale of the cusp width,
// so the quadrature walks dyadic panels downward until the remaining mass is
// certifiably below tolerance.

#include <array>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qmrank/core.hpp"
#include "qmrank/errors.hpp"
#include "qmrank/kernels.hpp"
#include "qmrank/numeric.hpp"
#include "qmrank/rational.hpp"
#include "qmrank/rooteval.hpp"

namespace qmrank {

namespace detail {

template <class C> C exp_guarded(const C& w) {
    using R = real_of<C>;
    using std::exp;
    if (scalar_traits<C>::digits10 <= 16 && w.real() > R(690))
        throw precision_error("exponent too large for double evaluation");
    return exp(w);
}

// Integral over t in (0, T] of a complex-valued f with Gaussian-type decay
// upward and flat decay toward t = 0.  T is found by measured decay, then
// dyadic panels [hi/2, hi] are accumulated downward until the bottom is
// certified negligible.
template <class C, class F>
C integrate_up(F&& f, const real_of<C>& tol, const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::abs;
    using std::max;
    (void)ctx;
    R T = R(4);
    int ok = 0;
    for (int i = 0;; ++i) {
        if (i > 240) throw precision_error("integrate_up: no tail decay found");
        const R mag = abs(f(T));
        if (mag * T < tol / 8) {
            if (++ok >= 2) break;
        } else {
            ok = 0;
        }
        T *= R(1.4);
        if (T > R(5e4)) throw precision_error("integrate_up: tail extends beyond budget");
    }

    const R rel = max(tol / 8, R(50) * std::numeric_limits<R>::epsilon());
    C total = C(R(0));
    R hi = T;
    int below = 0;
    for (int p = 0;; ++p) {
        if (p > 140) throw precision_error("integrate_up: panel floor reached without certification");
        const R lo = hi / 2;
        R perr = R(0);
        const C panel =
            boost::math::quadrature::gauss_kronrod<R, 15>::integrate(f, lo, hi, 10, rel, &perr);
        total += panel;
        if (abs(panel) < tol / 8 && abs(f(lo)) * lo < tol / 8) {
            if (++below >= 2) break;
        } else {
            below = 0;
        }
        hi = lo;
        if (hi < R(1e-24)) throw precision_error("integrate_up: no flat zone found above the floor");
    }
    return total;
}

// sqrt(-i (rho + tau)) for rho = base + i t: principal, right half plane.
template <class C>
C sqrt_minus_i_shift(const real_of<C>& base, const real_of<C>& t, const C& tau) {
    using R = real_of<C>;
    const C w = C(t + tau.imag(), -(base + tau.real()));
    return sqrt_principal<C>(w);
}

} // namespace detail

// --------------------------------------------------------------------------
// int_{base}^{i infty} g_{a,b}(scale rho) / sqrt(-i(rho + tau)) d rho.
// tau may lie in the upper half plane or on the real line; tau = -base is a
// non-integrable endpoint and is rejected.
template <class C>
C period_integral_g(const real_of<C>& a, const real_of<C>& b, int scale, const Rational& base,
                    const C& tau, const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::abs;
    if (!(tau.imag() >= 0)) throw domain_error("period_integral_g: Im tau must be >= 0");
    const R base_r = base.to_real<R>();
    if (tau.imag() == 0 && abs(base_r + tau.real()) < R(1e-14))
        throw domain_error("period_integral_g: endpoint singularity tau = -base");
    const PrecisionContext inner = ctx.tightened(0.25);
    auto f = [&](const R& t) -> C {
        const C sigma = C(R(scale) * base_r, R(scale) * t);
        return g_weight32<C>(a, b, sigma, inner) / detail::sqrt_minus_i_shift<C>(base_r, t, tau);
    };
    const R tol = R(ctx.target_abs_err);
    return iu<C>() * detail::integrate_up<C>(f, tol, ctx);
}

// Same contour with the integrand d/du g_{l u + pm/3 + 1/2, -3u + 1/2}(3 rho)
// at u = u0 (dg_du applies the factor 3 internally via its argument).
template <class C>
C period_integral_dg(const Rational& u0, int pm, long ell, const Rational& base, const C& tau,
                     const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::abs;
    if (!(tau.imag() >= 0)) throw domain_error("period_integral_dg: Im tau must be >= 0");
    const R base_r = base.to_real<R>();
    if (tau.imag() == 0 && abs(base_r + tau.real()) < R(1e-14))
        throw domain_error("period_integral_dg: endpoint singularity tau = -base");
    const PrecisionContext inner = ctx.tightened(0.25);
    auto f = [&](const R& t) -> C {
        const C rho = C(base_r, t);
        return dg_du<C>(u0, pm, ell, rho, inner) / detail::sqrt_minus_i_shift<C>(base_r, t, tau);
    };
    const R tol = R(ctx.target_abs_err);
    return iu<C>() * detail::integrate_up<C>(f, tol, ctx);
}

// --------------------------------------------------------------------------
// The +/- pair of period integrals entering H and Htilde:
//   I_pm = int_{1/ell}^{i infty} g_{pm/3 + 1/2, 1/2 - 3 alpha/beta}(3 rho)
//                                / sqrt(-i(rho + tau)) d rho
template <class C>
std::array<C, 2> H_pm_integrals(const RootOfUnity& ab, long ell, const C& tau,
                                const PrecisionContext& ctx) {
    using R = real_of<C>;
    const Rational b = Rational(1, 2) - Rational(3 * ab.alpha, ab.beta);
    const Rational base(1, ell);
    const R br = b.to_real<R>();
    return {period_integral_g<C>(R(5) / 6, br, 3, base, tau, ctx),
            period_integral_g<C>(R(1) / 6, br, 3, base, tau, ctx)};
}

// H_{alpha,beta}(tau) = sqrt(3) [ -e(-1/6) I_+ + e(1/6) I_- ]
template <class C>
C H_alpha_beta(const RootOfUnity& ab, long ell, const C& tau, const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::sqrt;
    const std::array<C, 2> I = H_pm_integrals<C>(ab, ell, tau, ctx);
    const C ep = e_of_real<C>(R(-1) / 6), em = e_of_real<C>(R(1) / 6);
    return sqrt(R(3)) * (-ep * I[0] + em * I[1]);
}

// Htilde_{alpha,beta}(tau) = sqrt(3) pi i e(2 alpha/beta) [ -e(-1/6) I_+ + 3 e(1/6) I_- ]
template <class C>
C Htilde_alpha_beta(const RootOfUnity& ab, long ell, const C& tau, const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::sqrt;
    const std::array<C, 2> I = H_pm_integrals<C>(ab, ell, tau, ctx);
    const C ep = e_of_real<C>(R(-1) / 6), em = e_of_real<C>(R(1) / 6);
    const R pi = pi_v<R>();
    return sqrt(R(3)) * C(R(0), pi) * ab.template power<C>(2, 1) * (-ep * I[0] + R(3) * em * I[1]);
}

// D_{alpha,beta}(tau): same combination with the derivative integrand.
template <class C>
C D_alpha_beta(const RootOfUnity& ab, long ell, const C& tau, const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::sqrt;
    const Rational u0(ab.alpha, ab.beta);
    const Rational base(1, ell);
    const C Qp = period_integral_dg<C>(u0, +1, ell, base, tau, ctx);
    const C Qm = period_integral_dg<C>(u0, -1, ell, base, tau, ctx);
    const C ep = e_of_real<C>(R(-1) / 6), em = e_of_real<C>(R(1) / 6);
    return sqrt(R(3)) * (-ep * Qp + em * Qm);
}

// --------------------------------------------------------------------------
// S_ell action x -> x / (ell x + 1) on complex arguments.
template <class C> C s_ell_apply(long ell, const C& x) {
    using R = real_of<C>;
    using std::abs;
    const C den = R(ell) * x + C(R(1));
    if (abs(den) < R(1e-14)) throw domain_error("s_ell_apply: pole of the action");
    return x / den;
}

// E1 = (l x + 1)^{1/2} zeta_24^l q_x^{-1/24} e(3a/2b) - e(-S_l x / 24) e(3a/2b)
template <class C>
C E1_err(const RootOfUnity& ab, long ell, const C& x) {
    using R = real_of<C>;
    const C lx1 = R(ell) * x + C(R(1));
    const C z24l = e_of_real<C>(R(ell) / 24);
    const C e32 = ab.template power<C>(3, 2);
    const C slx = s_ell_apply<C>(ell, x);
    return detail::sqrt_principal<C>(lx1) * z24l * qpow_rat<C>(x, Rational{-1, 24}) * e32
           - qpow_rat<C>(slx, Rational{-1, 24}) * e32;
}

// E2 = (l x + 1)^{3/2} zeta_24^l q_x^{-1/24} e(-a/2b) - e(-S_l x / 24) e(-a/2b)
template <class C>
C E2_err(const RootOfUnity& ab, long ell, const C& x) {
    using R = real_of<C>;
    const C lx1 = R(ell) * x + C(R(1));
    const C z24l = e_of_real<C>(R(ell) / 24);
    const C em12 = ab.template power<C>(-1, 2);
    const C slx = s_ell_apply<C>(ell, x);
    return detail::pow32_principal<C>(lx1) * z24l * qpow_rat<C>(x, Rational{-1, 24}) * em12
           - qpow_rat<C>(slx, Rational{-1, 24}) * em12;
}

// --------------------------------------------------------------------------
// The two Mordell-type pieces of the W1 transformation law, at real v near
// r = 3 alpha/beta - [3 alpha/beta], for the branch sign s = +-1:
//
//  T1 = sqrt((i/3)(1/tau + l)) e(A^2 / (6 tau (l tau + 1))) h(v tau_l/3 - s/3; tau_l/3)
//  T2 = -(l tau + 1)^{1/2} zeta_24^l
//        e(-r^2 l^2 tau/6 - l A^2/(6 (l tau + 1)) + (r l / 3) A) h(A - r l tau; 3 tau)
//  with A = v (l tau + 1) + s tau and tau_l = -1/tau - l.
template <class C>
C T1_plus_T2(const real_of<C>& v, int s, const Rational& r, long ell, const C& tau,
             const PrecisionContext& ctx) {
    using R = real_of<C>;
    if (s != 1 && s != -1) throw domain_error("T1_plus_T2: branch sign must be +-1");
    const R pi = pi_v<R>();
    const C one(R(1));
    const C ltau1 = R(ell) * tau + one;
    const C A = v * ltau1 + R(s) * tau;
    const C tau_l = -one / tau - C(R(ell));
    const C tau_l3 = tau_l / R(3);
    const R rr = r.to_real<R>();

    // T1
    const C w1 = (iu<C>() / R(3)) * (one / tau + C(R(ell)));
    const C phi1 = A * A / (R(6) * tau * ltau1);
    const MordellParts<C> p1 = mordell_h_parts<C>(v * tau_l3 - C(R(s)) / R(3), tau_l3, ctx);
    const C T1 = detail::sqrt_principal<C>(w1)
                 * detail::exp_guarded<C>(C(R(0), 2 * pi) * phi1 + p1.expo) * p1.scaled;

    // T2
    const C phi2 = -rr * rr * R(ell) * R(ell) * tau / R(6) - R(ell) * A * A / (R(6) * ltau1)
                   + (rr * R(ell) / R(3)) * A;
    const MordellParts<C> p2 = mordell_h_parts<C>(A - rr * R(ell) * tau, C(R(3)) * tau, ctx);
    const C T2 = -detail::sqrt_principal<C>(ltau1) * e_of_real<C>(R(ell) / 24)
                 * detail::exp_guarded<C>(C(R(0), 2 * pi) * phi2 + p2.expo) * p2.scaled;

    return T1 + T2;
}

// The same two pieces separately (for the period-integral identities).
template <class C>
std::array<C, 2> T1_T2_split(const real_of<C>& v, int s, const Rational& r, long ell, const C& tau,
                             const PrecisionContext& ctx) {
    using R = real_of<C>;
    if (s != 1 && s != -1) throw domain_error("T1_T2_split: branch sign must be +-1");
    const R pi = pi_v<R>();
    const C one(R(1));
    const C ltau1 = R(ell) * tau + one;
    const C A = v * ltau1 + R(s) * tau;
    const C tau_l = -one / tau - C(R(ell));
    const C tau_l3 = tau_l / R(3);
    const R rr = r.to_real<R>();
    const C w1 = (iu<C>() / R(3)) * (one / tau + C(R(ell)));
    const C phi1 = A * A / (R(6) * tau * ltau1);
    const MordellParts<C> p1 = mordell_h_parts<C>(v * tau_l3 - C(R(s)) / R(3), tau_l3, ctx);
    const C T1 = detail::sqrt_principal<C>(w1)
                 * detail::exp_guarded<C>(C(R(0), 2 * pi) * phi1 + p1.expo) * p1.scaled;
    const C phi2 = -rr * rr * R(ell) * R(ell) * tau / R(6) - R(ell) * A * A / (R(6) * ltau1)
                   + (rr * R(ell) / R(3)) * A;
    const MordellParts<C> p2 = mordell_h_parts<C>(A - rr * R(ell) * tau, C(R(3)) * tau, ctx);
    const C T2 = -detail::sqrt_principal<C>(ltau1) * e_of_real<C>(R(ell) / 24)
                 * detail::exp_guarded<C>(C(R(0), 2 * pi) * phi2 + p2.expo) * p2.scaled;
    return {T1, T2};
}

// --------------------------------------------------------------------------
// Weight-1/2 cocycle.  Per-fraction term:
//   (1/2) e(2 alpha/beta) H_{alpha,beta}(x) + zeta_24^{-l} (l x + 1)^{-1/2} E1(x)
template <class C>
C cocycle_H1_term(const RootOfUnity& ab, long ell, const C& x, const PrecisionContext& ctx) {
    using R = real_of<C>;
    const C lx1 = R(ell) * x + C(R(1));
    return ab.template power<C>(2, 1) * H_alpha_beta<C>(ab, ell, x, ctx) / R(2)
           + e_of_real<C>(-R(ell) / 24) / detail::sqrt_principal<C>(lx1) * E1_err<C>(ab, ell, x);
}

// Assembled over the singly-occurring fractions, weighted by
// (zeta_{2b}^{-3a} - zeta_{2b}^{-a}) / Pi_j^dag.
template <class C>
C cocycle_H1_Sl(const ZetaVector& v, long ell, const C& x, const PiOracle& pi,
                const PrecisionContext& ctx) {
    using R = real_of<C>;
    pi.validate(v);
    C sum = C(R(0));
    const int singles = v.n - 2 * v.N;
    for (int j = 0; j < singles; ++j) {
        const RootOfUnity& ab = v.fractions[static_cast<std::size_t>(v.N + j)];
        const C coeff = ab.template power<C>(-3, 2) - ab.template power<C>(-1, 2);
        const C pid = make_cx<C>(pi.pidag[static_cast<std::size_t>(j)].real(),
                                 pi.pidag[static_cast<std::size_t>(j)].imag());
        sum += coeff / pid * cocycle_H1_term<C>(ab, ell, x, ctx);
    }
    return sum;
}

// Weight-3/2 cocycle.  Per-fraction bracket:
//   (l x + 1)^{1/2} zeta_24^l [ (l/2 - 3 alpha l / beta) H_{alpha,beta}(x)
//                               - D_{alpha,beta}(x) / (2 pi i) ] + E2(x)
template <class C>
C cocycle_H2_term(const RootOfUnity& ab, long ell, const C& x, const PrecisionContext& ctx) {
    using R = real_of<C>;
    const R pi = pi_v<R>();
    const C lx1 = R(ell) * x + C(R(1));
    const Rational coef = Rational(ell, 2) - Rational(3 * ab.alpha * ell, ab.beta);
    const C H = H_alpha_beta<C>(ab, ell, x, ctx);
    const C D = D_alpha_beta<C>(ab, ell, x, ctx);
    return detail::sqrt_principal<C>(lx1) * e_of_real<C>(R(ell) / 24)
               * (coef.to_real<R>() * H - D / C(R(0), 2 * pi))
           + E2_err<C>(ab, ell, x);
}

// Assembled over the doubled fractions, weighted by
// (zeta_{2b}^{a} - zeta_{2b}^{-a}) / (2 Pi_j(0)), with the leading
// -zeta_24^{-l} (l x + 1)^{-3/2} prefactor (displayed closed form).
template <class C>
C cocycle_H2_Sl(const ZetaVector& v, long ell, const C& x, const PiOracle& pi,
                const PrecisionContext& ctx) {
    using R = real_of<C>;
    pi.validate(v);
    C sum = C(R(0));
    for (int j = 0; j < v.N; ++j) {
        const RootOfUnity& ab = v.fractions[static_cast<std::size_t>(j)];
        const C coeff = ab.template power<C>(1, 2) - ab.template power<C>(-1, 2);
        const C pi0 = make_cx<C>(pi.pi0[static_cast<std::size_t>(j)].real(),
                                 pi.pi0[static_cast<std::size_t>(j)].imag());
        sum += coeff / (R(2) * pi0) * cocycle_H2_term<C>(ab, ell, x, ctx);
    }
    const C lx1 = R(ell) * x + C(R(1));
    return -e_of_real<C>(-R(ell) / 24) / detail::pow32_principal<C>(lx1) * sum;
}

// --------------------------------------------------------------------------
// hminus_h(tau) = sum_{j=1}^{N} c_j [ 2 S(alpha_j/beta_j; tau)
//                                     - dS/du (alpha_j/beta_j; tau) / (2 pi i) ],
// c_j = (zeta_{2b}^{-3a} - zeta_{2b}^{-5a}) / Pi_j(0).
template <class C>
C hminus_h(const ZetaVector& v, const C& tau, const PiOracle& pi, const PrecisionContext& ctx) {
    using R = real_of<C>;
    pi.validate(v);
    const R pival = pi_v<R>();
    C sum = C(R(0));
    for (int j = 0; j < v.N; ++j) {
        const RootOfUnity& ab = v.fractions[static_cast<std::size_t>(j)];
        const C cj = (ab.template power<C>(-3, 2) - ab.template power<C>(-5, 2))
                     / make_cx<C>(pi.pi0[static_cast<std::size_t>(j)].real(),
                                  pi.pi0[static_cast<std::size_t>(j)].imag());
        const C sval = S_func<C>(ab, tau, ctx);
        const C dval = dS_du<C>(ab, tau, ctx);
        sum += cj * (R(2) * sval - dval / C(R(0), 2 * pival));
    }
    return sum;
}

} // namespace qmrank
