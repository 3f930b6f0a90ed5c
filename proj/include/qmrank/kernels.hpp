#pragma once

// Analytic kernels on the upper half plane, templated over the complex
// scalar C (std::complex<double> or boost cpp_complex_50).
//
//  theta_sum_pow    S_p(a, b; tau) = sum_{nu in a+Z} nu^p e^{pi i nu^2 tau + 2 pi i nu b}
//  theta            theta(u; tau)  = S_0(1/2, u + 1/2; tau)
//  theta_product    the triple product form of theta
//  theta_moments    (S_0, S_1, S_2) evaluated through exact modular reduction,
//                   stable arbitrarily close to the real axis
//  g_weight32       g_{a,b} = S_1, via the reduction
//  dg_du            termwise u-derivative of g_{l u +- 1/3 + 1/2, -3u + 1/2}(3 rho)
//  zwegers_E        E(z) = 2 int_0^z e^{-pi t^2} dt
//  zwegers_R        R(u; tau), with its real-direction and anti-holomorphic
//                   (d/d conj u) derivatives
//  mordell_h        h(z; tau) = int_R e^{pi i tau t^2 - 2 pi z t} / cosh(pi t) dt,
//                   also split as exp(expo) * scaled for overflow-free composition
//  appell_a3        level-3 Appell sum A_3(u, v; tau)
//  script_R3        its completion term; a3_hat = appell_a3 + script_R3
//  eta_h            Dedekind eta on the upper half plane; pochhammer_inf
//  S_func, W1, W2, dS_du, F_alpha_beta
//                   the rational-argument composite kernels

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qmrank/core.hpp"
#include "qmrank/errors.hpp"
#include "qmrank/numeric.hpp"
#include "qmrank/rational.hpp"

namespace qmrank {

// Validated carrier for a point of the upper half plane.
template <class C> struct TauPoint {
    C tau;
    TauPoint(const C& t) : tau(t) { // implicit: validates at every call boundary
        if (!(t.imag() > 0)) throw domain_error("TauPoint: Im tau must be positive");
    }
};

namespace detail {

template <class R> long floor_long(const R& x) {
    using std::floor;
    return static_cast<long>(static_cast<double>(floor(x)));
}

template <class C> C e_frac(const real_of<C>& x) { // e^{2 pi i x}, real x
    using R = real_of<C>;
    const R a = 2 * pi_v<R>() * x;
    using std::cos;
    using std::sin;
    return C(cos(a), sin(a));
}

template <class C> C sqrt_principal(const C& z) {
    using std::sqrt;
    return sqrt(z);
}

// z^{3/2} on the principal branch (exp((3/2) Log z) == z * sqrt(z)).
template <class C> C pow32_principal(const C& z) { return z * sqrt_principal(z); }

} // namespace detail

// --------------------------------------------------------------------------
// S_p(a, b; tau), p in {0, 1, 2}.  Walks outward from the magnitude peak;
// a direction stops once two consecutive terms are below tolerance and the
// measured decay ratio is <= 1/2 (Gaussian regime), which certifies the tail.
template <class C>
C theta_sum_pow(int p, const real_of<C>& a, const C& b, const TauPoint<C>& taup,
                const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::abs;
    using std::exp;
    if (p < 0 || p > 2) throw domain_error("theta_sum_pow: p must be 0, 1 or 2");
    const C tau = taup.tau;
    const R y = tau.imag();
    const R pi = pi_v<R>();
    const R tol = R(ctx.target_abs_err) / 8;
    // |term| ~ exp(-pi nu^2 y - 2 pi nu Im b): peak at nu* = -Im b / y
    const R nu_star = -b.imag() / y;
    const long n0 = detail::floor_long(nu_star - a + R(0.5));

    C sum = C(0);
    long used = 0;
    const C two_pi_i_b = C(R(0), 2 * pi) * b; // i * (2 pi b) -- careful: b complex
    for (int dir = 0; dir < 2; ++dir) {
        const long step = (dir == 0) ? 1 : -1;
        long n = n0 + ((dir == 0) ? 0 : -1);
        R prev_mag = R(-1);
        int quiet = 0;
        for (;; n += step) {
            if (++used > ctx.max_terms)
                throw precision_error("theta_sum_pow: term budget exhausted");
            const R nu = a + R(n);
            const C expo = C(R(0), pi) * (nu * nu) * tau + two_pi_i_b * nu;
            C t = exp(expo);
            if (p >= 1) t *= nu;
            if (p == 2) t *= nu;
            sum += t;
            const R mag = abs(t);
            if (mag < tol && (prev_mag < R(0) || mag <= prev_mag / 2)) {
                if (++quiet >= 2) break;
            } else {
                quiet = 0;
            }
            prev_mag = mag;
        }
    }
    return sum;
}

// theta(u; tau) = sum_{nu in 1/2 + Z} e^{pi i nu^2 tau + 2 pi i nu (u + 1/2)}
template <class C>
C theta(const C& u, const TauPoint<C>& tau, const PrecisionContext& ctx) {
    using R = real_of<C>;
    return theta_sum_pow<C>(0, R(0.5), u + C(R(0.5)), tau, ctx);
}

// Triple product: -i e^{pi i tau/4} e^{-pi i u}
//                  prod_{m>=1} (1-q^m)(1 - e^{2 pi i u} q^{m-1})(1 - e^{-2 pi i u} q^m)
template <class C>
C theta_product(const C& u, const TauPoint<C>& tau, const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::abs;
    using std::exp;
    const C tau_v = tau.tau;
    const R pi = pi_v<R>();
    const C q = exp(C(R(0), 2 * pi) * tau_v);
    const C zp = exp(C(R(0), 2 * pi) * u);
    const C zm = C(R(1)) / zp;
    C prod = exp(C(R(0), pi) * (tau_v / R(4) - u)) * C(R(0), R(-1));
    C qm = C(R(1)); // q^{m-1}
    const R tol = R(ctx.target_abs_err) / 8;
    for (long m = 1;; ++m) {
        if (m > ctx.max_terms) throw precision_error("theta_product: factor budget exhausted");
        const C qm1 = qm;  // q^{m-1}
        qm *= q;           // q^m
        prod *= (C(R(1)) - qm) * (C(R(1)) - zp * qm1) * (C(R(1)) - zm * qm);
        // remaining factors differ from 1 by O(|q|^m (1 + |zp| + |zm|))
        const R rest = abs(qm) * (R(1) + abs(zp) + abs(zm));
        if (rest < tol && abs(qm) < R(0.5)) break;
    }
    return prod;
}

// --------------------------------------------------------------------------
// (S_0, S_1, S_2)(a, b; sigma) by exact modular reduction.  b must be real.
// Transformation steps (each exact):
//   a-shift   V(a+1, b)        = V(a, b)
//   b-shift   V(a, b+1)        = e^{2 pi i a} V(a, b)
//   T-step    V(a, b; s)       = e^{-pi i a(a+1)} V(a, a+b+1/2; s-1)
//   S-step    with P = e^{2 pi i a b} (i/s)^{1/2}, t = -1/s:
//             S_0(a,b;s) = P S_0(b,-a;t)
//             S_1(a,b;s) = P t S_1(b,-a;t)
//             S_2(a,b;s) = P (t^2 S_2(b,-a;t) - (i t / (2 pi)) S_0(b,-a;t))
template <class C>
std::array<C, 3> theta_moments(const real_of<C>& a_in, const real_of<C>& b_in,
                               const TauPoint<C>& sigma_in, const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::abs;
    using std::exp;
    using std::floor;
    const R pi = pi_v<R>();

    R a = a_in, b = b_in;
    C sigma = sigma_in.tau;

    // accumulated linear map: result = M * (S_0, S_1, S_2)(a, b; sigma)
    C m00 = C(R(1)), m11 = C(R(1)), m22 = C(R(1)), m20 = C(R(0));

    auto normalize_ab = [&](void) {
        a -= floor(a); // free
        const R mb = floor(b);
        if (mb != 0) {
            const C f = detail::e_frac<C>(a * mb);
            m00 *= f; m11 *= f; m22 *= f; m20 *= f;
            b -= mb;
        }
    };
    normalize_ab();

    int iters = 0;
    while (sigma.imag() < R(0.5)) {
        if (++iters > 220) throw precision_error("theta_moments: reduction did not terminate");
        // T-steps: sigma -> sigma - m with m = round(Re sigma)
        const R m = floor(sigma.real() + R(0.5));
        if (m != 0) {
            const C f = exp(C(R(0), -pi) * (a * (a + 1)) * m);
            m00 *= f; m11 *= f; m22 *= f; m20 *= f;
            b += m * (a + R(0.5));
            sigma -= C(m);
            normalize_ab();
            if (sigma.imag() >= R(0.5)) break;
        }
        // S-step (|sigma| < 1 is guaranteed here: |Re| <= 1/2, Im < 1/2)
        const C t = C(R(-1)) / sigma;
        const C P = detail::e_frac<C>(a * b) * detail::sqrt_principal<C>(iu<C>() / sigma);
        // new vector W at (b, -a; t):  old = M' W with
        //   S_0 = P W_0;  S_1 = P t W_1;  S_2 = P t^2 W_2 - P (i t / (2 pi)) W_0
        const C Pt = P * t;
        const C new_m00 = m00 * P;
        const C new_m11 = m11 * Pt;
        const C new_m22 = m22 * Pt * t;
        const C new_m20 = m20 * P - m22 * P * iu<C>() * t / (2 * pi);
        m00 = new_m00; m11 = new_m11; m22 = new_m22; m20 = new_m20;
        const R na = b, nb = -a;
        a = na; b = nb;
        sigma = t;
        normalize_ab();
    }

    const std::array<C, 3> w = {
        theta_sum_pow<C>(0, a, C(b), sigma, ctx),
        theta_sum_pow<C>(1, a, C(b), sigma, ctx),
        theta_sum_pow<C>(2, a, C(b), sigma, ctx),
    };
    return {m00 * w[0], m11 * w[1], m20 * w[0] + m22 * w[2]};
}

// g_{a,b}(sigma) = S_1(a, b; sigma), reduced when close to the real axis.
template <class C>
C g_weight32(const real_of<C>& a, const real_of<C>& b, const TauPoint<C>& sigma,
             const PrecisionContext& ctx) {
    using R = real_of<C>;
    if (sigma.tau.imag() >= R(0.5)) return theta_sum_pow<C>(1, a, C(b), sigma, ctx);
    return theta_moments<C>(a, b, sigma, ctx)[1];
}

// d/du g_{l u + pm/3 + 1/2, -3u + 1/2}(3 rho) at real u0:
//   l S_0 + 2 pi i l b S_1 + 6 pi i (l rho - 1) S_2,  b = 1/2 - 3 u0,
// with the moments taken at (l u0 + pm/3 + 1/2, b; 3 rho).
template <class C>
C dg_du(const Rational& u0, int pm, long ell, const C& rho, const PrecisionContext& ctx) {
    using R = real_of<C>;
    if (pm != 1 && pm != -1) throw domain_error("dg_du: pm must be +1 or -1");
    const R pi = pi_v<R>();
    const R u0r = u0.to_real<R>();
    const R a = R(ell) * u0r + R(pm) / 3 + R(0.5);
    const R b = R(0.5) - 3 * u0r;
    const C arg = C(R(3)) * rho;
    std::array<C, 3> s;
    if (arg.imag() >= R(0.5))
        s = {theta_sum_pow<C>(0, a, C(b), arg, ctx), theta_sum_pow<C>(1, a, C(b), arg, ctx),
             theta_sum_pow<C>(2, a, C(b), arg, ctx)};
    else
        s = theta_moments<C>(a, b, arg, ctx);
    const C twopii = C(R(0), 2 * pi);
    return R(ell) * s[0] + twopii * R(ell) * b * s[1] + C(R(0), 6 * pi) * (R(ell) * rho - C(R(1))) * s[2];
}

// --------------------------------------------------------------------------
// E(z) = 2 int_0^z e^{-pi t^2} dt = erf(sqrt(pi) x)
//        + 2 i e^{-pi x^2} int_0^y e^{pi s^2} e^{-2 pi i x s} ds,  z = x + i y.
template <class C>
C zwegers_E(const C& z, const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::abs;
    using std::exp;
    using std::sqrt;
    const R pi = pi_v<R>();
    const R x = z.real(), y = z.imag();
    const R main = erf_r(sqrt(pi) * x);
    if (y == 0) return C(main);
    if (abs(y) > R(12)) throw precision_error("zwegers_E: imaginary part too large for stable evaluation");
    const R sg = (y > 0) ? R(1) : R(-1);
    auto f = [&](const R& s) -> C {
        const R t = sg * s;
        return exp(C(pi * (t * t - x * x), -2 * pi * x * t));
    };
    const R qtol = R(ctx.target_abs_err) / 16;
    const C leg = boost::math::quadrature::gauss_kronrod<R, 31>::integrate(f, R(0), sg * y, 12, qtol);
    return C(main) + C(R(0), R(2)) * sg * leg;
}

// --------------------------------------------------------------------------
// R(u; tau) = sum_{nu in 1/2+Z} {sgn(nu) - E((nu + Im u / Im tau) sqrt(2 Im tau))}
//             (-1)^{nu - 1/2} e^{-pi i nu^2 tau - 2 pi i nu u}
// The weight is computed as sgn(nu) erfc(sgn(nu) sqrt(pi) z_nu), which is
// stable on both sides.  deriv = 1 multiplies each term by -2 pi i nu, the
// derivative along the real direction of u (the weights are then constant).
template <class C>
C zwegers_R_impl(const C& u, const TauPoint<C>& taup, const PrecisionContext& ctx, int deriv) {
    using R = real_of<C>;
    using std::abs;
    using std::exp;
    using std::log;
    using std::sqrt;
    const C tau = taup.tau;
    const R pi = pi_v<R>();
    const R y = tau.imag();
    const R c = u.imag() / y;
    const R s2y = sqrt(2 * y);
    const R spi = sqrt(pi);
    const R tol = R(ctx.target_abs_err) / 8;
    const R logtol = log(tol);

    C sum = C(0);
    long used = 0;
    const long k0 = detail::floor_long(-c); // nu = k + 1/2 near -c
    for (int dir = 0; dir < 2; ++dir) {
        const long step = (dir == 0) ? 1 : -1;
        long k = k0 + ((dir == 0) ? 0 : -1);
        for (;; k += step) {
            if (++used > ctx.max_terms) throw precision_error("zwegers_R: term budget exhausted");
            const R nu = R(k) + R(0.5);
            const R sg = (nu > 0) ? R(1) : R(-1);
            const R zn = (nu + c) * s2y;
            const bool agree = (sg * zn > 0);
            // net bound in the agree zone: |term| <= e^{-pi y ((nu+c)^2 + c^2)}
            if (agree) {
                const R bexp = -pi * y * ((nu + c) * (nu + c) + c * c);
                if (bexp < logtol) break; // certified Gaussian tail
            }
            const R factor = sg * erfc_r(sg * spi * zn);
            if (factor != 0) {
                C t = exp(C(R(0), -pi) * ((nu * nu) * tau + 2 * nu * u));
                t *= factor;
                if (deriv == 1) t *= C(R(0), -2 * pi) * nu;
                sum += ((k % 2 == 0) ? t : -t);
            }
        }
    }
    return sum;
}

template <class C>
C zwegers_R(const C& u, const TauPoint<C>& tau, const PrecisionContext& ctx) {
    return zwegers_R_impl<C>(u, tau, ctx, 0);
}

// d/d(Re u) R(u; tau)
template <class C>
C zwegers_R_dreal(const C& u, const TauPoint<C>& tau, const PrecisionContext& ctx) {
    return zwegers_R_impl<C>(u, tau, ctx, 1);
}

// d/d(conj u) R(u; tau).  R is real-analytic but not holomorphic in u: the
// exponentials are holomorphic, so only the E-weights contribute, giving
//   -i sqrt(2 / Im tau) sum_{nu in 1/2+Z} (-1)^{nu - 1/2}
//       e^{-2 pi Im tau (nu + c)^2} e^{-pi i nu^2 tau - 2 pi i nu u},
// with c = Im u / Im tau.  Every term carries the certified Gaussian bound
// e^{-pi Im tau ((nu + c)^2 + c^2)}, so the sum truncates unconditionally.
template <class C>
C zwegers_R_dzbar(const C& u, const TauPoint<C>& taup, const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::exp;
    using std::log;
    using std::sqrt;
    const C tau = taup.tau;
    const R pi = pi_v<R>();
    const R y = tau.imag();
    const R c = u.imag() / y;
    const R logtol = log(R(ctx.target_abs_err) / 8);
    C sum = C(0);
    long used = 0;
    const long k0 = detail::floor_long(-c); // nu = k + 1/2 near -c
    for (int dir = 0; dir < 2; ++dir) {
        const long step = (dir == 0) ? 1 : -1;
        long k = k0 + ((dir == 0) ? 0 : -1);
        for (;; k += step) {
            if (++used > ctx.max_terms)
                throw precision_error("zwegers_R_dzbar: term budget exhausted");
            const R nu = R(k) + R(0.5);
            if (-pi * y * ((nu + c) * (nu + c) + c * c) < logtol) break;
            const C expo = C(-2 * pi * y * (nu + c) * (nu + c))
                           + C(R(0), -pi) * ((nu * nu) * tau + 2 * nu * u);
            const C t = exp(expo);
            sum += ((k % 2 == 0) ? t : -t);
        }
    }
    return C(R(0), R(-1)) * sqrt(R(2) / y) * sum;
}

// --------------------------------------------------------------------------
// Mordell integral h(z; tau) = int_R e^{pi i tau t^2 - 2 pi z t} / cosh(pi t) dt.
// Completing the square with c = i z / tau gives
//   h = exp(pi i z^2 / tau) * int e^{pi i tau (t+c)^2} / cosh(pi t) dt.
// On the real line the Gaussian factor carries a constant excess
// peak = pi (Im c + kappa)^2 |tau|^2 / Im tau over its true envelope, so the
// integral must cancel down by e^{-peak}; when |Re tau| >> Im tau that excess
// is enormous and the quadrature would return pure roundoff.  We therefore
// integrate over the horizontal line R + i kappa with
// kappa = clamp(-Im c, +-0.47) -- legal since the only poles of 1/cosh(pi t)
// sit at Im t = 1/2 + Z -- which makes peak = 0 whenever |Re(z/tau)| <= 0.47
// and leaves the scaled integrand free of catastrophic cancellation.
template <class C> struct MordellParts {
    C expo;   // h = exp(expo) * scaled
    C scaled; // the contour integral of the scaled integrand
};

template <class C>
MordellParts<C> mordell_h_parts(const C& z, const TauPoint<C>& taup, const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::abs;
    using std::ceil;
    using std::exp;
    using std::log;
    using std::max;
    using std::min;
    using std::sqrt;
    const C tau = taup.tau;
    const R pi = pi_v<R>();
    const R x = tau.real(), y = tau.imag();
    if (y < R(ctx.min_im_tau))
        throw precision_error("mordell_h: Im tau below the oscillation guard");

    const C c = iu<C>() * z / tau;
    const R a = c.real(), b = c.imag();
    const R kmax = R(47) / R(100); // stay clear of the cosh poles at Im t = +-1/2
    const R kappa = min(max(-b, -kmax), kmax);
    const R bs = b + kappa; // residual offset after the contour shift (0 when |b| <= kmax)
    const R peak = pi * bs * bs * (x * x + y * y) / y;

    // scaled integrand on the line t = u + i kappa: modulus bounded by
    // sec(pi kappa) * 2 e^{-pi y (u - t0)^2 - pi |u|} with t0 = -a - x bs / y
    // (exact: Re exponent = -pi y (u - t0)^2 - pi |u| after the peak subtraction)
    const R t0 = -a - x * bs / y;
    auto f = [&](const R& u) -> C {
        const C tc = C(u + a, bs);
        const C expo = C(R(0), pi) * tau * (tc * tc) - C(peak);
        const R sgn = u >= R(0) ? R(1) : R(-1);
        const C w = C(u * sgn, kappa * sgn); // sgn*(u + i kappa), Re w = |u|
        // 1/cosh(pi sgn w) = 2 e^{-pi w} / (1 + e^{-2 pi w}); |1 + e^{-2 pi w}| >= 2 cos(pi kmax)
        return R(2) * exp(expo - pi * w) / (R(1) + exp(R(-2) * pi * w));
    };

    const R tol = R(ctx.target_abs_err) / 4;
    const R L = -log(tol) + R(7); // +7 also absorbs the sec(pi kappa) <= 10.7 envelope factor
    const R W = sqrt(L / (pi * y)) + R(1);
    const R hi = min(t0 + W, L / pi + R(1));
    const R lo = max(t0 - W, -(L / pi) - R(1));
    if (!(hi > lo)) { // bump entirely damped: integral below tolerance
        return {C(peak) + C(R(0), pi) * z * z / tau, C(R(0))};
    }

    // oscillation rate: |d/du Im exponent| <= 2 pi (|x| (|u| + |a|) + y |bs|)
    const R tmax_abs = max(abs(lo), abs(hi));
    const R omega = 2 * pi * (abs(x) * (tmax_abs + abs(a)) + y * abs(bs)) + R(1);
    long n = static_cast<long>(static_cast<double>(ceil((hi - lo) * omega / (2 * pi) * R(3)))) + 32;
    if (n > ctx.max_terms) throw precision_error("mordell_h: initial grid exceeds term budget");

    // trapezoid with halving and point reuse
    R h = (hi - lo) / R(n);
    C sum = (f(lo) + f(hi)) / R(2);
    for (long k = 1; k < n; ++k) sum += f(lo + R(k) * h);
    C I = sum * h;
    for (int pass = 0; pass < 24; ++pass) {
        C odd = C(0);
        const long nn = 2 * n;
        if (nn > ctx.max_terms) throw precision_error("mordell_h: refinement exceeds term budget");
        const R h2 = h / 2;
        for (long k = 1; k < nn; k += 2) odd += f(lo + R(k) * h2);
        const C I2 = I / R(2) + odd * h2;
        const bool done = abs(I2 - I) < tol;
        I = I2;
        n = nn;
        h = h2;
        if (done) break;
        if (pass == 23) throw precision_error("mordell_h: quadrature did not converge");
    }

    // h = exp(pi i z^2 / tau) e^{peak} * I
    return {C(R(0), pi) * z * z / tau + C(peak), I};
}

template <class C>
C mordell_h(const C& z, const TauPoint<C>& tau, const PrecisionContext& ctx) {
    using R = real_of<C>;
    const MordellParts<C> p = mordell_h_parts<C>(z, tau, ctx);
    using std::exp;
    if (p.expo.real() > R(600) && scalar_traits<C>::digits10 <= 16)
        throw precision_error("mordell_h: result exceeds double range; use the parts form");
    return exp(p.expo) * p.scaled;
}

// --------------------------------------------------------------------------
// A_3(u, v; tau) = e^{3 pi i u} sum_{n in Z} (-1)^n q^{3n(n+1)/2} e^{2 pi i n v}
//                                            / (1 - e^{2 pi i u} q^n)
template <class C>
C appell_a3(const C& u, const C& v, const TauPoint<C>& taup, const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::abs;
    using std::exp;
    const C tau = taup.tau;
    const R pi = pi_v<R>();
    const R y = tau.imag();
    const R tol = R(ctx.target_abs_err) / 8;
    const R guard = R(1e4) * std::numeric_limits<R>::epsilon();

    // term magnitude ~ e^{-3 pi y n^2 + O(n)}: center the walk near the peak
    const long n0 = detail::floor_long(-(v.imag() / (3 * y)) - R(0.5) + R(0.5));
    C sum = C(0);
    long used = 0;
    for (int dir = 0; dir < 2; ++dir) {
        const long step = (dir == 0) ? 1 : -1;
        long n = n0 + ((dir == 0) ? 0 : -1);
        R prev_mag = R(-1);
        int quiet = 0;
        for (;; n += step) {
            if (++used > ctx.max_terms) throw precision_error("appell_a3: term budget exhausted");
            const R nn = R(n);
            // exponent of the numerator: pi i (3u + 3 n(n+1) tau + 2 n v)
            C num_expo = C(R(0), pi) * (C(R(3)) * u + 3 * nn * (nn + 1) * tau + 2 * nn * v);
            const C w_expo = C(R(0), 2 * pi) * (u + nn * tau); // e^{w_expo} = e^{2 pi i u} q^n
            C t;
            if (w_expo.real() > R(0.5)) { // |w| > e^{1/2}: rewrite 1/(1-w) = -w^{-1}/(1-w^{-1})
                const C den = C(R(1)) - exp(-w_expo);
                if (abs(den) < guard) throw domain_error("appell_a3: argument at a pole");
                t = -exp(num_expo - w_expo) / den;
            } else {
                const C den = C(R(1)) - exp(w_expo);
                if (abs(den) < guard) throw domain_error("appell_a3: argument at a pole");
                t = exp(num_expo) / den;
            }
            if (n % 2 != 0) t = -t;
            sum += t;
            const R mag = abs(t);
            if (mag < tol && (prev_mag < R(0) || mag <= prev_mag / 2)) {
                if (++quiet >= 2) break;
            } else {
                quiet = 0;
            }
            prev_mag = mag;
        }
    }
    return sum;
}

// Completion term:
//   script_R3(u, v; tau) = (i/2) sum_{j=0}^{2} e^{2 pi i j u}
//                          theta(v + j tau; 3 tau) R(3u - v - j tau; 3 tau)
// shifted_form uses the equivalent arguments v + j tau + 1 / 3u - v - j tau - 1.
template <class C>
C script_R3(const C& u, const C& v, const TauPoint<C>& taup, const PrecisionContext& ctx,
            bool shifted_form = false) {
    using R = real_of<C>;
    using std::exp;
    const C tau = taup.tau;
    const C tau3 = C(R(3)) * tau;
    const R pi = pi_v<R>();
    C sum = C(0);
    for (int j = 0; j < 3; ++j) {
        const C off = shifted_form ? C(R(1)) : C(R(0));
        const C tv = v + R(j) * tau + off;
        const C ru = C(R(3)) * u - v - R(j) * tau - off;
        sum += exp(C(R(0), 2 * pi) * R(j) * u) * theta<C>(tv, tau3, ctx) * zwegers_R<C>(ru, tau3, ctx);
    }
    return sum * C(R(0), R(0.5));
}

template <class C>
C a3_hat(const C& u, const C& v, const TauPoint<C>& tau, const PrecisionContext& ctx) {
    return appell_a3<C>(u, v, tau, ctx) + script_R3<C>(u, v, tau, ctx);
}

// --------------------------------------------------------------------------
// eta(tau) = e^{2 pi i tau/24} sum_{j in Z} (-1)^j e^{2 pi i tau j(3j-1)/2}
template <class C>
C pochhammer_inf(const TauPoint<C>& taup, const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::abs;
    using std::exp;
    const C tau = taup.tau;
    const R pi = pi_v<R>();
    const R tol = R(ctx.target_abs_err) / 8;
    C sum = C(1); // j = 0
    for (long j = 1;; ++j) {
        if (j > ctx.max_terms) throw precision_error("pochhammer_inf: term budget exhausted");
        const R g1 = R(j) * (3 * R(j) - 1) / 2;
        const R g2 = R(j) * (3 * R(j) + 1) / 2;
        const C t1 = exp(C(R(0), 2 * pi) * g1 * tau);
        const C t2 = exp(C(R(0), 2 * pi) * g2 * tau);
        const C t = (j % 2 == 0) ? (t1 + t2) : -(t1 + t2);
        sum += t;
        if (abs(t1) < tol && abs(t2) < tol) break;
    }
    return sum;
}

template <class C>
C eta_h(const TauPoint<C>& taup, const PrecisionContext& ctx) {
    using R = real_of<C>;
    using std::exp;
    const R pi = pi_v<R>();
    return exp(C(R(0), 2 * pi) * taup.tau / R(24)) * pochhammer_inf<C>(taup, ctx);
}

// --------------------------------------------------------------------------
// e^{2 pi i s tau} for rational s (the q^s convention: always through exp).
template <class C> C qpow_rat(const C& tau, const Rational& s) {
    using R = real_of<C>;
    using std::exp;
    const R pi = pi_v<R>();
    return exp(C(R(0), 2 * pi) * s.to_real<R>() * tau);
}

// --------------------------------------------------------------------------
// Composite kernels at the rational parameter u = alpha/beta (half-integer
// powers of e(u) are taken on the stored representative).
//
//   S_func(u; tau) = (q^{-1/6}/2) [ -e(u) R(3u + tau; 3 tau)
//                                   + e(3u) R(3u - tau; 3 tau) ]
//                    - q^{-1/24} e(3u/2)
template <class C>
C S_func(const RootOfUnity& ab, const TauPoint<C>& taup, const PrecisionContext& ctx) {
    using R = real_of<C>;
    const C tau = taup.tau;
    const C tau3 = C(R(3)) * tau;
    const R u = R(ab.alpha) / R(ab.beta);
    const C u3 = C(3 * u);
    const C rp = zwegers_R<C>(u3 + tau, tau3, ctx);
    const C rm = zwegers_R<C>(u3 - tau, tau3, ctx);
    const C e1 = ab.template power<C>(1, 1);
    const C e3 = ab.template power<C>(3, 1);
    const C e32 = ab.template power<C>(3, 2);
    return qpow_rat<C>(tau, Rational{-1, 6}) * (-e1 * rp + e3 * rm) / R(2)
           - qpow_rat<C>(tau, Rational{-1, 24}) * e32;
}

//   F_{alpha,beta}(tau) = q^{-1/6} [ e(-u) R(3u + tau; 3 tau) - e(u) R(3u - tau; 3 tau) ]
template <class C>
C F_alpha_beta(const RootOfUnity& ab, const TauPoint<C>& taup, const PrecisionContext& ctx) {
    using R = real_of<C>;
    const C tau = taup.tau;
    const C tau3 = C(R(3)) * tau;
    const R u = R(ab.alpha) / R(ab.beta);
    const C u3 = C(3 * u);
    const C rp = zwegers_R<C>(u3 + tau, tau3, ctx);
    const C rm = zwegers_R<C>(u3 - tau, tau3, ctx);
    const C em1 = ab.template power<C>(-1, 1);
    const C e1 = ab.template power<C>(1, 1);
    return qpow_rat<C>(tau, Rational{-1, 6}) * (em1 * rp - e1 * rm);
}

//   W1(u; tau) = (q^{-1/6}/2) [ -e(u) d/du R(3u + tau; 3 tau)
//                               + e(3u) d/du R(3u - tau; 3 tau) ]   (chain factor 3)
template <class C>
C W1(const RootOfUnity& ab, const TauPoint<C>& taup, const PrecisionContext& ctx) {
    using R = real_of<C>;
    const C tau = taup.tau;
    const C tau3 = C(R(3)) * tau;
    const R u = R(ab.alpha) / R(ab.beta);
    const C u3 = C(3 * u);
    const C dp = zwegers_R_dreal<C>(u3 + tau, tau3, ctx) * R(3);
    const C dm = zwegers_R_dreal<C>(u3 - tau, tau3, ctx) * R(3);
    const C e1 = ab.template power<C>(1, 1);
    const C e3 = ab.template power<C>(3, 1);
    return qpow_rat<C>(tau, Rational{-1, 6}) * (-e1 * dp + e3 * dm) / R(2);
}

//   W2(u; tau) = pi i q^{-1/6} [ -e(u) R(3u + tau; 3 tau) + 3 e(3u) R(3u - tau; 3 tau) ]
template <class C>
C W2(const RootOfUnity& ab, const TauPoint<C>& taup, const PrecisionContext& ctx) {
    using R = real_of<C>;
    const C tau = taup.tau;
    const C tau3 = C(R(3)) * tau;
    const R u = R(ab.alpha) / R(ab.beta);
    const C u3 = C(3 * u);
    const C rp = zwegers_R<C>(u3 + tau, tau3, ctx);
    const C rm = zwegers_R<C>(u3 - tau, tau3, ctx);
    const C e1 = ab.template power<C>(1, 1);
    const C e3 = ab.template power<C>(3, 1);
    const R pi = pi_v<R>();
    return C(R(0), pi) * qpow_rat<C>(tau, Rational{-1, 6}) * (-e1 * rp + R(3) * e3 * rm);
}

//   dS/du at u = alpha/beta: -3 pi i q^{-1/24} e(3u/2) + W1 + W2
template <class C>
C dS_du(const RootOfUnity& ab, const TauPoint<C>& taup, const PrecisionContext& ctx) {
    using R = real_of<C>;
    const R pi = pi_v<R>();
    const C e32 = ab.template power<C>(3, 2);
    return C(R(0), -3 * pi) * qpow_rat<C>(taup.tau, Rational{-1, 24}) * e32
           + W1<C>(ab, taup, ctx) + W2<C>(ab, taup, ctx);
}

} // namespace qmrank
