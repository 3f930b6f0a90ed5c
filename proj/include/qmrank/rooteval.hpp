#pragma once

// Finite evaluations at roots of unity.  On the quantum set of a vector the
// multisum collapses to finitely many terms:
//
//   R_n(zeta; e(h/k)) = prod_j (1 - ((1-x_j^k)(1-x_j^{-k}))^{-1})^{-1}
//                       * sum_{0 < m_1 <= k, 0 <= m_2..m_n < k} [summand at q = e(h/k)]
//
// plus the correction terms built from the n = 1 sum:
//
//   AP(x; h/k)   = x^{5/2}/(1-x) R_1(x; e(h/k)) + x^{3/2}
//   b_n, script_A, B^+ = R_n + b_n, script_H = e(-x/24) B^+ - script_A,
//
// where the Pi-data (values Pi_j(0), derivatives Pi_j'(0), and the daggered
// products) enter through an externally supplied oracle (all-ones default).

#include <cstdint>
#include <string>
#include <vector>

#include "qmrank/core.hpp"
#include "qmrank/errors.hpp"
#include "qmrank/numeric.hpp"

namespace qmrank {

// --------------------------------------------------------------------------
struct PiOracle {
    std::vector<cx64> pi0;   // Pi_j(0),   j = 1..N
    std::vector<cx64> dpi0;  // Pi_j'(0),  j = 1..N
    std::vector<cx64> pidag; // daggered products, j = N+1..n-N
    std::string provenance = "default-ones";

    static PiOracle default_ones(const ZetaVector& v) {
        PiOracle p;
        p.pi0.assign(static_cast<std::size_t>(v.N), cx64(1.0, 0.0));
        p.dpi0.assign(static_cast<std::size_t>(v.N), cx64(0.0, 0.0));
        p.pidag.assign(static_cast<std::size_t>(v.n - 2 * v.N), cx64(1.0, 0.0));
        return p;
    }

    void validate(const ZetaVector& v) const {
        if (static_cast<int>(pi0.size()) != v.N || static_cast<int>(dpi0.size()) != v.N)
            throw domain_error("PiOracle: pi0/dpi0 must have N entries");
        if (static_cast<int>(pidag.size()) != v.n - 2 * v.N)
            throw domain_error("PiOracle: pidag must have n - 2N entries");
        for (const auto& z : pi0)
            if (std::abs(z) == 0) throw domain_error("PiOracle: Pi_j(0) must be nonzero");
        for (const auto& z : pidag)
            if (std::abs(z) == 0) throw domain_error("PiOracle: daggered product must be nonzero");
    }
};

namespace detail {

// Quantum condition for a single fraction at h/k: beta does not divide k and
// the distance from k alpha/beta to the nearest integer exceeds 1/6
// (equivalently 6 min(t, beta - t) > beta with t = (alpha k) mod beta).
inline bool fraction_is_quantum(const RootOfUnity& ab, const RationalPoint& pt) {
    const std::int64_t beta = ab.beta;
    if (pt.k % beta == 0) return false;
    std::int64_t t = (ab.alpha % beta) * (pt.k % beta) % beta;
    t = ((t % beta) + beta) % beta;
    const std::int64_t m = t < beta - t ? t : beta - t;
    return 6 * m > beta;
}

} // namespace detail

// --------------------------------------------------------------------------
// R_1(x; e(h/k)) by the collapsed sum.  Requires the quantum condition for x.
template <class C>
C r1_at_root(const RootOfUnity& x, const RationalPoint& pt, const PrecisionContext&) {
    using R = real_of<C>;
    using std::abs;
    using std::cos;
    if (!detail::fraction_is_quantum(x, pt))
        throw domain_error("r1_at_root: " + pt.str() + " is not a quantum point for the fraction");
    const std::int64_t k = pt.k, h = pt.h;
    const R pi = pi_v<R>();
    // (1 - x^k)(1 - x^{-k}) = 2 - 2 cos(2 pi alpha k / beta)
    std::int64_t rk = ((x.alpha % x.beta) * (k % x.beta)) % x.beta;
    rk = ((rk % x.beta) + x.beta) % x.beta;
    const R qq = 2 - 2 * cos(2 * pi * R(rk) / R(x.beta));
    const C pref = C(R(1)) / (C(R(1)) - C(R(1)) / C(qq));

    C sum = C(R(0));
    C pochA = C(R(1)), pochB = C(R(1)); // (x zeta; zeta)_s, (x^{-1} zeta; zeta)_s
    const C xv = x.template power<C>(1, 1);
    const C xinv = x.template power<C>(-1, 1);
    for (std::int64_t s = 0; s < k; ++s) {
        if (s > 0) {
            const C zs = e_of_real<C>(R(h) * R(s) / R(k));
            pochA *= (C(R(1)) - xv * zs);
            pochB *= (C(R(1)) - xinv * zs);
        }
        const std::int64_t e = (s * s % k) * (h % k) % k;
        sum += e_of_real<C>(R(((e % k) + k) % k) / R(k)) / (pochA * pochB);
    }
    return pref * sum;
}

// --------------------------------------------------------------------------
// R_n at a quantum point, by the collapsed multisum.
template <class C>
C rn_at_root(const ZetaVector& v, const RationalPoint& pt, const PrecisionContext&) {
    using R = real_of<C>;
    using std::abs;
    using std::cos;
    if (!is_quantum_point(v, pt))
        throw domain_error("rn_at_root: " + pt.str() + " is not a quantum point of the vector");
    const std::vector<RootOfUnity> xs = v.expanded();
    const int n = v.n;
    const std::int64_t k = pt.k, h = pt.h;
    const R pi = pi_v<R>();

    // root-of-unity table Z[t] = e(h t / k), t in [0, k)
    std::vector<C> Z(static_cast<std::size_t>(k));
    for (std::int64_t t = 0; t < k; ++t) {
        const std::int64_t e = ((h % k) * t % k + k) % k;
        Z[static_cast<std::size_t>(t)] = e_of_real<C>(R(e) / R(k));
    }

    // factor tables F[j][t] = 1 - x_j Z[t], G[j][t] = 1 - Z[t]/x_j
    std::vector<std::vector<C>> F(static_cast<std::size_t>(n)), G(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const C xj = xs[static_cast<std::size_t>(j)].template power<C>(1, 1);
        const C xjinv = xs[static_cast<std::size_t>(j)].template power<C>(-1, 1);
        auto& Fj = F[static_cast<std::size_t>(j)];
        auto& Gj = G[static_cast<std::size_t>(j)];
        Fj.resize(static_cast<std::size_t>(k));
        Gj.resize(static_cast<std::size_t>(k));
        for (std::int64_t t = 0; t < k; ++t) {
            Fj[static_cast<std::size_t>(t)] = C(R(1)) - xj * Z[static_cast<std::size_t>(t)];
            Gj[static_cast<std::size_t>(t)] = C(R(1)) - xjinv * Z[static_cast<std::size_t>(t)];
            if (abs(Fj[static_cast<std::size_t>(t)]) < R(1e-12) || abs(Gj[static_cast<std::size_t>(t)]) < R(1e-12))
                throw domain_error("rn_at_root: vanishing denominator factor");
        }
    }

    // prefactor prod_j 1/(1 - 1/((1 - x_j^k)(1 - x_j^{-k})))
    C pref = C(R(1));
    for (int j = 0; j < n; ++j) {
        const RootOfUnity& ab = xs[static_cast<std::size_t>(j)];
        std::int64_t rk = ((ab.alpha % ab.beta) * (k % ab.beta)) % ab.beta;
        rk = ((rk % ab.beta) + ab.beta) % ab.beta;
        const R qq = 2 - 2 * cos(2 * pi * R(rk) / R(ab.beta));
        pref *= C(R(1)) / (C(R(1)) - C(R(1)) / C(qq));
    }

    // depth-first sum over m_1 in [1, k], m_j in [0, k-1] (j >= 2); the
    // denominator product is extended incrementally.  The q-exponent is
    // (sum m)^2 + sum of the first n-1 prefixes, taken mod k.
    C total = C(R(0));
    std::vector<std::int64_t> m(static_cast<std::size_t>(n), 0);

    auto leaf = [&](const C& denom) {
        std::int64_t s = 0, expo = 0, prefix = 0;
        for (int j = 0; j < n; ++j) s += m[static_cast<std::size_t>(j)];
        expo = (s % k) * (s % k) % k;
        for (int j = 0; j < n - 1; ++j) {
            prefix += m[static_cast<std::size_t>(j)];
            expo = (expo + prefix) % k;
        }
        total += Z[static_cast<std::size_t>(expo % k)] / denom;
    };

    auto walk = [&](auto&& self, int level, std::int64_t prefix, const C& denom) -> void {
        if (level == n) {
            leaf(denom);
            return;
        }
        auto& Fl = F[static_cast<std::size_t>(level)];
        auto& Gl = G[static_cast<std::size_t>(level)];
        if (level == 0) {
            C d = denom;
            for (std::int64_t m1 = 1; m1 <= k; ++m1) {
                const std::int64_t t = m1 % k;
                d *= Fl[static_cast<std::size_t>(t)] * Gl[static_cast<std::size_t>(t)];
                m[0] = m1;
                self(self, 1, m1, d);
            }
            m[0] = 0;
        } else {
            // i = 0 factor sits at the prefix exponent
            C d = denom;
            for (std::int64_t mj = 0; mj < k; ++mj) {
                const std::int64_t t = (prefix + mj) % k;
                d *= Fl[static_cast<std::size_t>(t)] * Gl[static_cast<std::size_t>(t)];
                m[static_cast<std::size_t>(level)] = mj;
                self(self, level + 1, prefix + mj, d);
            }
            m[static_cast<std::size_t>(level)] = 0;
        }
    };
    walk(walk, 0, 0, C(R(1)));
    return pref * total;
}

// --------------------------------------------------------------------------
// AP(x; h/k) = x^{5/2}/(1-x) R_1(x; e(h/k)) + x^{3/2}, half-integer powers on
// the stored representative of x.
template <class C>
C a3_over_pochinf_at_root(const RootOfUnity& x, const RationalPoint& pt,
                          const PrecisionContext& ctx) {
    const C x52 = x.template power<C>(5, 2);
    const C x32 = x.template power<C>(3, 2);
    const C xv = x.template power<C>(1, 1);
    return x52 / (C(real_of<C>(1)) - xv) * r1_at_root<C>(x, pt, ctx) + x32;
}

// --------------------------------------------------------------------------
// b_n correction at h/k:
//   sum_{j=1}^{N} AP_j [ z2^{-1} (zb^{-1}/2) (3/Pi0 + Pi0'/(pi i Pi0^2))
//                        - z2^{-3} (zb^{-1}/2) (1/Pi0 + Pi0'/(pi i Pi0^2)) ]
// with z2 = e(alpha/(2 beta)), zb = e(alpha/beta).
template <class C>
C b_n_at_root(const ZetaVector& v, const RationalPoint& pt, const PiOracle& pi,
              const PrecisionContext& ctx) {
    using R = real_of<C>;
    pi.validate(v);
    const R pival = pi_v<R>();
    C sum = C(R(0));
    for (int j = 0; j < v.N; ++j) {
        const RootOfUnity& ab = v.fractions[static_cast<std::size_t>(j)];
        const C ap = a3_over_pochinf_at_root<C>(ab, pt, ctx);
        const C zb_inv = ab.template power<C>(-1, 1);
        const C z2m1 = ab.template power<C>(-1, 2);
        const C z2m3 = ab.template power<C>(-3, 2);
        const C pi0 = make_cx<C>(pi.pi0[static_cast<std::size_t>(j)].real(),
                                 pi.pi0[static_cast<std::size_t>(j)].imag());
        const C dpi = make_cx<C>(pi.dpi0[static_cast<std::size_t>(j)].real(),
                                 pi.dpi0[static_cast<std::size_t>(j)].imag());
        const C dterm = dpi / (C(R(0), pival) * pi0 * pi0);
        sum += ap * (zb_inv / R(2)) * (z2m1 * (C(R(3)) / pi0 + dterm) - z2m3 * (C(R(1)) / pi0 + dterm));
    }
    return sum;
}

// B^+ = R_n + b_n
template <class C>
C B_plus_at_root(const ZetaVector& v, const RationalPoint& pt, const PiOracle& pi,
                 const PrecisionContext& ctx) {
    return rn_at_root<C>(v, pt, ctx) + b_n_at_root<C>(v, pt, pi, ctx);
}

// script_A(x) = e(-x/24) sum_{j=N+1}^{n-N} (z2^{-3} - z2^{-1}) / Pi_j^dag AP_j
template <class C>
C script_A_at_root(const ZetaVector& v, const RationalPoint& pt, const PiOracle& pi,
                   const PrecisionContext& ctx) {
    using R = real_of<C>;
    pi.validate(v);
    C sum = C(R(0));
    const int singles = v.n - 2 * v.N;
    for (int j = 0; j < singles; ++j) {
        const RootOfUnity& ab = v.fractions[static_cast<std::size_t>(v.N + j)];
        const C ap = a3_over_pochinf_at_root<C>(ab, pt, ctx);
        const C z2m1 = ab.template power<C>(-1, 2);
        const C z2m3 = ab.template power<C>(-3, 2);
        const C pid = make_cx<C>(pi.pidag[static_cast<std::size_t>(j)].real(),
                                 pi.pidag[static_cast<std::size_t>(j)].imag());
        sum += (z2m3 - z2m1) / pid * ap;
    }
    const R x = R(pt.h) / R(pt.k);
    return e_of_real<C>(-x / 24) * sum;
}

// script_H(x) = e(-x/24) B^+(x) - script_A(x)
template <class C>
C script_H_at_root(const ZetaVector& v, const RationalPoint& pt, const PiOracle& pi,
                   const PrecisionContext& ctx) {
    using R = real_of<C>;
    const R x = R(pt.h) / R(pt.k);
    return e_of_real<C>(-x / 24) * B_plus_at_root<C>(v, pt, pi, ctx)
           - script_A_at_root<C>(v, pt, pi, ctx);
}

} // namespace qmrank
