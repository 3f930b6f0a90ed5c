#include "qmrank/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "qmrank/rooteval.hpp" // detail::fraction_is_quantum

namespace qmrank {

namespace {

constexpr long kMaxModulus = 840;

void check_modulus(long m) {
    if (m < 1 || m > kMaxModulus)
        throw domain_error("cyclotomic: modulus out of range (1.." + std::to_string(kMaxModulus)
                           + "): " + std::to_string(m));
}

// exact division of integer polynomials (ascending coefficients, b monic)
std::vector<std::int64_t> poly_divide_exact(std::vector<std::int64_t> a,
                                            const std::vector<std::int64_t>& b) {
    const std::size_t db = b.size() - 1;
    if (a.size() < b.size()) throw domain_error("cyclotomic: bad polynomial division");
    std::vector<std::int64_t> q(a.size() - db, 0);
    for (std::size_t i = a.size(); i-- > b.size() - 1;) {
        if (i < db) break;
        const std::int64_t coef = a[i];
        if (coef == 0) continue;
        q[i - db] = coef;
        for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= coef * b[j];
    }
    for (const std::int64_t r : a)
        if (r != 0) throw domain_error("cyclotomic: polynomial division not exact");
    return q;
}

const std::vector<std::int64_t>& phi_poly(long m) {
    static std::map<long, std::vector<std::int64_t>> memo;
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    // x^m - 1 divided by all proper-divisor cyclotomic polynomials
    std::vector<std::int64_t> poly(static_cast<std::size_t>(m) + 1, 0);
    poly[0] = -1;
    poly[static_cast<std::size_t>(m)] = 1;
    for (long d = 1; d < m; ++d)
        if (m % d == 0) poly = poly_divide_exact(std::move(poly), phi_poly(d));
    return memo.emplace(m, std::move(poly)).first->second;
}

struct FieldData {
    long m = 1;
    long phi = 1;
    std::vector<std::int64_t> Phi;     // monic, ascending, degree phi
    std::vector<std::vector<bigq>> red; // red[t - phi] = z^t reduced, t in [phi, tmax]
};

const FieldData& field(long m) {
    static std::map<long, FieldData> memo;
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    check_modulus(m);
    FieldData fd;
    fd.m = m;
    fd.Phi = phi_poly(m);
    fd.phi = static_cast<long>(fd.Phi.size()) - 1;
    const long tmax = std::max(2 * fd.phi - 2, m - 1);
    fd.red.reserve(static_cast<std::size_t>(std::max<long>(tmax - fd.phi + 1, 0)));
    if (tmax >= fd.phi) {
        std::vector<bigq> row(static_cast<std::size_t>(fd.phi));
        for (long i = 0; i < fd.phi; ++i) row[static_cast<std::size_t>(i)] = -bigq(fd.Phi[static_cast<std::size_t>(i)]);
        fd.red.push_back(row);
        for (long t = fd.phi + 1; t <= tmax; ++t) {
            std::vector<bigq> next(static_cast<std::size_t>(fd.phi));
            const std::vector<bigq>& prev = fd.red.back();
            const bigq top = prev[static_cast<std::size_t>(fd.phi - 1)];
            for (long i = fd.phi - 1; i >= 1; --i)
                next[static_cast<std::size_t>(i)] = prev[static_cast<std::size_t>(i - 1)];
            next[0] = 0;
            if (top != 0) {
                const std::vector<bigq>& base = fd.red.front();
                for (long i = 0; i < fd.phi; ++i)
                    next[static_cast<std::size_t>(i)] += top * base[static_cast<std::size_t>(i)];
            }
            fd.red.push_back(std::move(next));
        }
    }
    return memo.emplace(m, std::move(fd)).first->second;
}

// trim trailing zeros of a rational polynomial
void trim(std::vector<bigq>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// polynomial division over Q: returns quotient, leaves remainder in a
std::vector<bigq> poly_divmod_q(std::vector<bigq>& a, const std::vector<bigq>& b) {
    std::vector<bigq> q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, bigq(0));
    const bigq lead = b.back();
    while (a.size() >= b.size()) {
        const bigq coef = a.back() / lead;
        const std::size_t shift = a.size() - b.size();
        q[shift] = coef;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= coef * b[j];
        a.pop_back(); // leading term cancels exactly
        trim(a);
        if (a.empty()) break;
    }
    return q;
}

} // namespace

long euler_phi(long m) {
    check_modulus(m);
    return field(m).phi;
}

const std::vector<std::int64_t>& cyclotomic_polynomial(long m) {
    check_modulus(m);
    return field(m).Phi;
}

// --------------------------------------------------------------------------
bool CyclotomicNumber::is_zero() const {
    for (const bigq& v : c)
        if (v != 0) return false;
    return true;
}

bool CyclotomicNumber::is_rational() const {
    for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i] != 0) return false;
    return true;
}

bigq CyclotomicNumber::rational_part() const {
    if (!is_rational()) throw domain_error("CyclotomicNumber: not a rational value");
    return c.empty() ? bigq(0) : c[0];
}

std::string CyclotomicNumber::str() const {
    if (is_rational()) return rational_part().str();
    std::ostringstream ss;
    bool first = true;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        if (!first) ss << " + ";
        ss << "(" << c[i].str() << ")";
        if (i > 0) ss << "*z^" << i;
        first = false;
    }
    ss << "  [z = e(1/" << m << ")]";
    return ss.str();
}

CyclotomicNumber CyclotomicNumber::operator-() const {
    CyclotomicNumber out = *this;
    for (bigq& v : out.c) v = -v;
    return out;
}

CyclotomicNumber& CyclotomicNumber::operator+=(const CyclotomicNumber& o) {
    if (m != o.m) throw domain_error("CyclotomicNumber: mixed moduli");
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
}

CyclotomicNumber& CyclotomicNumber::operator-=(const CyclotomicNumber& o) {
    if (m != o.m) throw domain_error("CyclotomicNumber: mixed moduli");
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
    return *this;
}

CyclotomicNumber& CyclotomicNumber::operator*=(const CyclotomicNumber& o) {
    if (m != o.m) throw domain_error("CyclotomicNumber: mixed moduli");
    const FieldData& fd = field(m);
    const std::size_t phi = static_cast<std::size_t>(fd.phi);
    std::vector<bigq> conv(2 * phi - 1, bigq(0));
    for (std::size_t i = 0; i < phi; ++i) {
        if (c[i] == 0) continue;
        for (std::size_t j = 0; j < phi; ++j) {
            if (o.c[j] == 0) continue;
            conv[i + j] += c[i] * o.c[j];
        }
    }
    std::vector<bigq> out(conv.begin(), conv.begin() + static_cast<std::ptrdiff_t>(phi));
    for (std::size_t t = phi; t < conv.size(); ++t) {
        if (conv[t] == 0) continue;
        const std::vector<bigq>& row = fd.red[t - phi];
        for (std::size_t i = 0; i < phi; ++i) out[i] += conv[t] * row[i];
    }
    c = std::move(out);
    return *this;
}

CyclotomicNumber& CyclotomicNumber::operator*=(const bigq& s) {
    for (bigq& v : c) v *= s;
    return *this;
}

CyclotomicNumber CyclotomicNumber::inverse() const {
    if (is_zero()) throw domain_error("CyclotomicNumber: inverse of zero");
    const FieldData& fd = field(m);
    // extended Euclid: r0 = Phi, r1 = this; track t-coefficients of this
    std::vector<bigq> r0(fd.Phi.size());
    for (std::size_t i = 0; i < fd.Phi.size(); ++i) r0[i] = bigq(fd.Phi[i]);
    std::vector<bigq> r1 = c;
    trim(r1);
    std::vector<bigq> t0{bigq(0)}, t1{bigq(1)};
    while (r1.size() > 1 || (r1.size() == 1 && !r0.empty() && r0.size() >= r1.size())) {
        if (r1.empty()) throw domain_error("CyclotomicNumber: inverse failed (zero divisor?)");
        if (r1.size() == 1) break; // nonzero constant gcd reached
        std::vector<bigq> q = poly_divmod_q(r0, r1);
        std::swap(r0, r1); // r1 holds old remainder now
        // t0, t1 = t1, t0 - q t1
        std::vector<bigq> tq(q.size() + t1.size() - 1, bigq(0));
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0) continue;
            for (std::size_t j = 0; j < t1.size(); ++j) tq[i + j] += q[i] * t1[j];
        }
        std::vector<bigq> tnew(std::max(t0.size(), tq.size()), bigq(0));
        for (std::size_t i = 0; i < t0.size(); ++i) tnew[i] += t0[i];
        for (std::size_t i = 0; i < tq.size(); ++i) tnew[i] -= tq[i];
        trim(tnew);
        if (tnew.empty()) tnew.push_back(bigq(0));
        t0 = std::move(t1);
        t1 = std::move(tnew);
    }
    // r1 is the nonzero constant gcd; t1 are the cofactors of this
    if (r1.empty() || r1[0] == 0)
        throw domain_error("CyclotomicNumber: inverse failed (degenerate gcd)");
    CyclotomicNumber out = cyc_zero(m);
    const bigq inv_g = bigq(1) / r1[0];
    for (std::size_t i = 0; i < t1.size() && i < out.c.size(); ++i) out.c[i] = t1[i] * inv_g;
    if (t1.size() > out.c.size())
        throw domain_error("CyclotomicNumber: inverse cofactor degree overflow");
    return out;
}

CyclotomicNumber CyclotomicNumber::promoted(long M) const {
    if (M == m) return *this;
    if (M % m != 0) throw domain_error("CyclotomicNumber: promotion requires m | M");
    CyclotomicNumber out = cyc_zero(M);
    const long step = M / m;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        CyclotomicNumber mono = root_power(M, static_cast<std::int64_t>(i) * step);
        mono *= c[i];
        out += mono;
    }
    return out;
}

CyclotomicNumber operator+(CyclotomicNumber a, const CyclotomicNumber& b) { return a += b; }
CyclotomicNumber operator-(CyclotomicNumber a, const CyclotomicNumber& b) { return a -= b; }
CyclotomicNumber operator*(CyclotomicNumber a, const CyclotomicNumber& b) { return a *= b; }
CyclotomicNumber operator*(CyclotomicNumber a, const bigq& s) { return a *= s; }

bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    return a.m == b.m && a.c == b.c;
}
bool operator!=(const CyclotomicNumber& a, const CyclotomicNumber& b) { return !(a == b); }

CyclotomicNumber cyc_zero(long m) {
    const FieldData& fd = field(m);
    CyclotomicNumber out;
    out.m = m;
    out.c.assign(static_cast<std::size_t>(fd.phi), bigq(0));
    return out;
}

CyclotomicNumber cyc_rational(long m, const bigq& v) {
    CyclotomicNumber out = cyc_zero(m);
    out.c[0] = v;
    return out;
}

CyclotomicNumber root_power(long m, std::int64_t e) {
    const FieldData& fd = field(m);
    e = ((e % m) + m) % m;
    CyclotomicNumber out = cyc_zero(m);
    if (e < fd.phi) {
        out.c[static_cast<std::size_t>(e)] = 1;
    } else {
        const std::vector<bigq>& row = fd.red[static_cast<std::size_t>(e - fd.phi)];
        out.c = row;
    }
    return out;
}

CyclotomicNumber one_minus_root_inverse(long m, std::int64_t e) {
    e = ((e % m) + m) % m;
    if (e == 0) throw domain_error("one_minus_root_inverse: the factor vanishes");
    const long d = static_cast<long>(m / std::gcd(static_cast<long>(e), m));
    // (1 - z^e)^{-1} = (1/d) sum_{j=0}^{d-2} (d-1-j) z^{e j}
    CyclotomicNumber out = cyc_zero(m);
    for (long j = 0; j <= d - 2; ++j) {
        CyclotomicNumber mono = root_power(m, e * j);
        mono *= bigq(d - 1 - j);
        out += mono;
    }
    out *= bigq(1, d);
    return out;
}

// --------------------------------------------------------------------------
namespace {

std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
    const std::int64_t l = std::lcm(a, b);
    if (l > kMaxModulus)
        throw domain_error("cyclotomic: exact path out of range (modulus " + std::to_string(l)
                           + " exceeds " + std::to_string(kMaxModulus) + ")");
    return l;
}

// exponent of x = zeta_beta^alpha inside Q(zeta_M): alpha * M / beta
std::int64_t root_exponent(const RootOfUnity& ab, long M) {
    return ab.alpha * (M / ab.beta);
}

} // namespace

bool exact_path_available(const ZetaVector& v, const RationalPoint& pt) {
    std::int64_t l = 1;
    for (const RootOfUnity& ab : v.fractions) l = std::lcm(l, ab.beta);
    return pt.k * l <= 360;
}

CyclotomicNumber r1_at_root_exact(const RootOfUnity& x, const RationalPoint& pt) {
    if (!detail::fraction_is_quantum(x, pt))
        throw domain_error("r1_at_root_exact: " + pt.str() + " is not a quantum point");
    const std::int64_t k = pt.k;
    const long M = static_cast<long>(lcm_checked(x.beta, k));
    const std::int64_t u = ((pt.h % k) + k) % k * (M / k) % M; // zeta_k^h = z^u
    const std::int64_t a = root_exponent(x, M);

    // prefactor: D / (D - 1) with D = (1 - x^k)(1 - x^{-k})
    const CyclotomicNumber one = cyc_rational(M, bigq(1));
    const CyclotomicNumber D = (one - root_power(M, a * k)) * (one - root_power(M, -a * k));
    const CyclotomicNumber pref = D * (D - one).inverse();

    CyclotomicNumber sum = cyc_zero(M);
    CyclotomicNumber pochinv = one;
    for (std::int64_t s = 0; s < k; ++s) {
        if (s > 0) {
            pochinv *= one_minus_root_inverse(M, a + u * s);
            pochinv *= one_minus_root_inverse(M, -a + u * s);
        }
        const std::int64_t expo = u % M * ((s * s) % k) % M;
        sum += root_power(M, expo) * pochinv;
    }
    return pref * sum;
}

CyclotomicNumber rn_at_root_exact(const ZetaVector& v, const RationalPoint& pt) {
    if (!is_quantum_point(v, pt))
        throw domain_error("rn_at_root_exact: " + pt.str() + " is not a quantum point");
    const std::vector<RootOfUnity> xs = v.expanded();
    const int n = v.n;
    const std::int64_t k = pt.k;
    std::int64_t M64 = k;
    for (const RootOfUnity& ab : xs) M64 = lcm_checked(M64, ab.beta);
    const long M = static_cast<long>(M64);
    const std::int64_t u = ((pt.h % k) + k) % k * (M / k) % M;

    const CyclotomicNumber one = cyc_rational(M, bigq(1));
    // inverse factor tables per coordinate and residue class
    std::vector<std::vector<CyclotomicNumber>> invF(static_cast<std::size_t>(n)),
        invG(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const std::int64_t a = root_exponent(xs[static_cast<std::size_t>(j)], M);
        auto& Fj = invF[static_cast<std::size_t>(j)];
        auto& Gj = invG[static_cast<std::size_t>(j)];
        Fj.reserve(static_cast<std::size_t>(k));
        Gj.reserve(static_cast<std::size_t>(k));
        for (std::int64_t t = 0; t < k; ++t) {
            Fj.push_back(one_minus_root_inverse(M, a + u * t));
            Gj.push_back(one_minus_root_inverse(M, -a + u * t));
        }
    }

    CyclotomicNumber pref = one;
    for (int j = 0; j < n; ++j) {
        const std::int64_t a = root_exponent(xs[static_cast<std::size_t>(j)], M);
        const CyclotomicNumber D =
            (one - root_power(M, a * k)) * (one - root_power(M, -a * k));
        pref *= D * (D - one).inverse();
    }

    CyclotomicNumber total = cyc_zero(M);
    std::vector<std::int64_t> m(static_cast<std::size_t>(n), 0);
    auto leaf = [&](const CyclotomicNumber& denominv) {
        std::int64_t s = 0, expo = 0, prefix = 0;
        for (int j = 0; j < n; ++j) s += m[static_cast<std::size_t>(j)];
        expo = (s % k) * (s % k) % k;
        for (int j = 0; j < n - 1; ++j) {
            prefix += m[static_cast<std::size_t>(j)];
            expo = (expo + prefix) % k;
        }
        total += root_power(M, u * expo) * denominv;
    };
    auto walk = [&](auto&& self, int level, std::int64_t prefix,
                    const CyclotomicNumber& denominv) -> void {
        if (level == n) {
            leaf(denominv);
            return;
        }
        auto& Fl = invF[static_cast<std::size_t>(level)];
        auto& Gl = invG[static_cast<std::size_t>(level)];
        CyclotomicNumber d = denominv;
        if (level == 0) {
            for (std::int64_t m1 = 1; m1 <= k; ++m1) {
                const std::int64_t t = m1 % k;
                d *= Fl[static_cast<std::size_t>(t)];
                d *= Gl[static_cast<std::size_t>(t)];
                m[0] = m1;
                self(self, 1, m1, d);
            }
            m[0] = 0;
        } else {
            for (std::int64_t mj = 0; mj < k; ++mj) {
                const std::int64_t t = (prefix + mj) % k;
                d *= Fl[static_cast<std::size_t>(t)];
                d *= Gl[static_cast<std::size_t>(t)];
                m[static_cast<std::size_t>(level)] = mj;
                self(self, level + 1, prefix + mj, d);
            }
            m[static_cast<std::size_t>(level)] = 0;
        }
    };
    walk(walk, 0, 0, one);
    return pref * total;
}

CyclotomicNumber ap_at_root_exact(const RootOfUnity& x, const RationalPoint& pt) {
    const long M = static_cast<long>(lcm_checked(2 * x.beta, pt.k));
    const CyclotomicNumber r1 = r1_at_root_exact(x, pt).promoted(M);
    const std::int64_t a2 = x.alpha * (M / (2 * x.beta)); // z^{a2} = x^{1/2}
    return root_power(M, 5 * a2) * one_minus_root_inverse(M, 2 * a2) * r1 + root_power(M, 3 * a2);
}

CyclotomicNumber b_n_at_root_exact_unitpi(const ZetaVector& v, const RationalPoint& pt) {
    std::int64_t M64 = 1;
    for (int j = 0; j < v.N; ++j)
        M64 = lcm_checked(M64, lcm_checked(2 * v.fractions[static_cast<std::size_t>(j)].beta, pt.k));
    if (v.N == 0) return cyc_rational(1, bigq(0));
    const long M = static_cast<long>(M64);
    CyclotomicNumber sum = cyc_zero(M);
    for (int j = 0; j < v.N; ++j) {
        const RootOfUnity& ab = v.fractions[static_cast<std::size_t>(j)];
        const CyclotomicNumber ap = ap_at_root_exact(ab, pt).promoted(M);
        const std::int64_t a2 = ab.alpha * (M / (2 * ab.beta));
        // (zeta_beta^{-alpha}/2) [ 3 zeta_{2 beta}^{-alpha} - zeta_{2 beta}^{-3 alpha} ]
        CyclotomicNumber bracket = root_power(M, -a2) * bigq(3) - root_power(M, -3 * a2);
        CyclotomicNumber coef = root_power(M, -2 * a2) * bigq(1, 2) * bracket;
        sum += coef * ap;
    }
    return sum;
}

CyclotomicNumber B_plus_at_root_exact_unitpi(const ZetaVector& v, const RationalPoint& pt) {
    const CyclotomicNumber rn = rn_at_root_exact(v, pt);
    const CyclotomicNumber bn = b_n_at_root_exact_unitpi(v, pt);
    const long M = static_cast<long>(lcm_checked(rn.m, bn.m));
    return rn.promoted(M) + bn.promoted(M);
}

CyclotomicNumber script_A_at_root_exact_unitpi(const ZetaVector& v, const RationalPoint& pt) {
    // e(-x/24) at x = h/k lives in Q(zeta_{24k}); the modulus must be a
    // multiple of 24 k itself, not merely of lcm(24, k)
    std::int64_t M64 = 24 * pt.k;
    if (M64 > kMaxModulus)
        throw domain_error("cyclotomic: exact path out of range (modulus " + std::to_string(M64)
                           + " exceeds " + std::to_string(kMaxModulus) + ")");
    const int singles = v.n - 2 * v.N;
    for (int j = 0; j < singles; ++j)
        M64 = lcm_checked(M64, 2 * v.fractions[static_cast<std::size_t>(v.N + j)].beta);
    const long M = static_cast<long>(M64);
    CyclotomicNumber sum = cyc_zero(M);
    for (int j = 0; j < singles; ++j) {
        const RootOfUnity& ab = v.fractions[static_cast<std::size_t>(v.N + j)];
        const CyclotomicNumber ap = ap_at_root_exact(ab, pt).promoted(M);
        const std::int64_t a2 = ab.alpha * (M / (2 * ab.beta));
        sum += (root_power(M, -3 * a2) - root_power(M, -a2)) * ap;
    }
    // e(-x/24) = zeta_{24 k}^{-h} = z^{-h M / (24 k)}
    const std::int64_t per = 24 * pt.k;
    const std::int64_t w = ((pt.h % per) + per) % per * (M / per);
    return root_power(M, -w) * sum;
}

CyclotomicNumber script_H_at_root_exact_unitpi(const ZetaVector& v, const RationalPoint& pt) {
    const CyclotomicNumber bp = B_plus_at_root_exact_unitpi(v, pt);
    const CyclotomicNumber sa = script_A_at_root_exact_unitpi(v, pt);
    std::int64_t M64 = lcm_checked(bp.m, sa.m);
    M64 = lcm_checked(M64, 24 * pt.k);
    const long M = static_cast<long>(M64);
    const std::int64_t per = 24 * pt.k;
    const std::int64_t w = ((pt.h % per) + per) % per * (M / per);
    return root_power(M, -w) * bp.promoted(M) - sa.promoted(M);
}

} // namespace qmrank
