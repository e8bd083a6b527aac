#ifndef HYPGEO_QSERIES_HPP
#define HYPGEO_QSERIES_HPP

// q-Pochhammer symbols, basic hypergeometric series, and the ten polynomial
// family evaluators (series and three-term-recurrence modes) together with
// the three duality formulas. Everything here is independent of the contour
// machinery so it can serve as an oracle for the polynomial limits.

#include <cmath>
#include <string>
#include <vector>

#include "common.hpp"

namespace hypgeo {

// (a;q)_n = prod_{k=0}^{n-1} (1 - a q^k), n >= 0
inline cplx qpoch(cplx a, cplx q, int n) {
    if (n < 0) throw domain_error("qpoch: negative order");
    cplx out(1.0, 0.0), qk(1.0, 0.0);
    for (int k = 0; k < n; ++k) {
        out *= 1.0 - a * qk;
        qk *= q;
    }
    return out;
}

// sum_k (a_1..a_r;q)_k / ((b_1..b_s;q)_k (q;q)_k) [(-1)^k q^{k(k-1)/2}]^{1+s-r} z^k.
// The bracket is the standard convention factor; it is absent in the balanced
// case r = s+1 used by most families here. Terminating when some a_i is
// q^{-n} (the corresponding factor reaches 0); otherwise summed until the
// tail is negligible, which requires |z| < 1.
inline cplx qhyper(const std::vector<cplx>& num, const std::vector<cplx>& den,
                   cplx q, cplx z, double tol = 1e-14, int max_terms = 10000) {
    cplx sum(0.0, 0.0), term(1.0, 0.0), qk(1.0, 0.0);
    const int extra = static_cast<int>(den.size()) + 1 -
                      static_cast<int>(num.size());
    int quiet = 0;
    for (int k = 0; k < max_terms; ++k) {
        sum += term;
        cplx ratio = z;
        double min_factor = 1e300;
        for (const cplx& a : num) {
            const cplx f = 1.0 - a * qk;
            min_factor = std::min(min_factor, std::abs(f));
            ratio *= f;
        }
        // A numerator factor at (numerical) zero terminates the series; the
        // exact zero of q^{-n} q^k at k = n can land a few ulp off 1.
        if (min_factor < 1e-10) return sum;
        for (const cplx& b : den) ratio /= 1.0 - b * qk;
        ratio /= 1.0 - q * qk;
        for (int j = 0; j < extra; ++j) ratio *= -qk;
        for (int j = 0; j > extra; --j) ratio /= -qk;
        term *= ratio;
        qk *= q;
        if (term == cplx(0.0, 0.0)) return sum; // terminating series
        double scale = std::max(1.0, std::abs(sum));
        if (std::abs(term) < tol * scale) {
            if (++quiet >= 3) return sum + term;
        } else {
            quiet = 0;
        }
    }
    throw numerical_error("qhyper: series did not terminate or converge");
}

enum class QPolyFamily {
    AskeyWilson,         // R_n(z; a,b,c,d)
    ContinuousDualQHahn, // H_n(z; a,b,c)
    BigQJacobi,          // J_n(x; a,b,c)
    AlSalamChihara,      // S_n(z; a,b)
    LittleQJacobi_p,     // p_n(x; a,b)
    LittleQJacobi_Y,     // Y_n(x; a,b)
    BigQLaguerre,        // L_n(x; a,b)
    LittleQLaguerre,     // W_n(x; a)
    ContBigQHermite,     // X_n(z; a)
    ContQHermite         // Q_n(z)
};

inline std::string family_name(QPolyFamily f) {
    switch (f) {
        case QPolyFamily::AskeyWilson: return "askey_wilson";
        case QPolyFamily::ContinuousDualQHahn: return "continuous_dual_q_hahn";
        case QPolyFamily::BigQJacobi: return "big_q_jacobi";
        case QPolyFamily::AlSalamChihara: return "al_salam_chihara";
        case QPolyFamily::LittleQJacobi_p: return "little_q_jacobi_p";
        case QPolyFamily::LittleQJacobi_Y: return "little_q_jacobi_y";
        case QPolyFamily::BigQLaguerre: return "big_q_laguerre";
        case QPolyFamily::LittleQLaguerre: return "little_q_laguerre";
        case QPolyFamily::ContBigQHermite: return "cont_big_q_hermite";
        case QPolyFamily::ContQHermite: return "cont_q_hermite";
    }
    return "?";
}

inline std::size_t family_param_count(QPolyFamily f) {
    switch (f) {
        case QPolyFamily::AskeyWilson: return 4;
        case QPolyFamily::ContinuousDualQHahn:
        case QPolyFamily::BigQJacobi: return 3;
        case QPolyFamily::AlSalamChihara:
        case QPolyFamily::LittleQJacobi_p:
        case QPolyFamily::LittleQJacobi_Y:
        case QPolyFamily::BigQLaguerre: return 2;
        case QPolyFamily::LittleQLaguerre:
        case QPolyFamily::ContBigQHermite: return 1;
        case QPolyFamily::ContQHermite: return 0;
    }
    return 0;
}

enum class QPolyMode { series, recurrence };

namespace detail {

inline cplx qpow(cplx q, int n) {
    cplx out(1.0, 0.0);
    for (int k = 0; k < n; ++k) out *= q;
    return out;
}

// q^{-n} computed as a finite product to keep |q| = 1 exact
inline cplx qpow_neg(cplx q, int n) { return 1.0 / qpow(q, n); }

inline void expect_params(QPolyFamily f, const std::vector<cplx>& p) {
    if (p.size() != family_param_count(f))
        throw domain_error("qpoly: family " + family_name(f) + " expects " +
                           std::to_string(family_param_count(f)) +
                           " parameters, got " + std::to_string(p.size()));
}

inline cplx qpoly_series(QPolyFamily f, int n, const std::vector<cplx>& p,
                         cplx q, cplx x) {
    const cplx qn = qpow(q, n), qmn = 1.0 / qn;
    switch (f) {
        case QPolyFamily::AskeyWilson:
            return qhyper({qmn, p[0] * p[1] * p[2] * p[3] * qn / q, p[0] * x,
                           p[0] / x},
                          {p[0] * p[1], p[0] * p[2], p[0] * p[3]}, q, q);
        case QPolyFamily::ContinuousDualQHahn:
            return qhyper({qmn, p[0] * x, p[0] / x}, {p[0] * p[1], p[0] * p[2]},
                          q, q);
        case QPolyFamily::BigQJacobi:
            return qhyper({qmn, p[0] * p[1] * qn * q, x}, {p[0] * q, p[2] * q},
                          q, q);
        case QPolyFamily::AlSalamChihara: // H_n with gamma = 0
            return qhyper({qmn, p[0] * x, p[0] / x}, {p[0] * p[1], 0.0}, q, q);
        case QPolyFamily::LittleQJacobi_p:
            return qhyper({qmn, p[0] * p[1] * qn * q}, {p[0] * q}, q, q * x);
        case QPolyFamily::LittleQJacobi_Y:
            return qhyper({qmn, p[0] * p[1] * qn * q, x}, {p[0] * q, 0.0}, q,
                          q);
        case QPolyFamily::BigQLaguerre:
            return qhyper({qmn, p[0] * q / x}, {p[0] * q}, q, x / p[1]) /
                   qpoch(qmn / p[1], q, n);
        case QPolyFamily::LittleQLaguerre:
            return qhyper({qmn, 0.0}, {p[0] * q}, q, q * x);
        case QPolyFamily::ContBigQHermite:
            return qpow(p[0] * x, n) *
                   qhyper({qmn, p[0] * x}, {}, q, qn / (x * x));
        case QPolyFamily::ContQHermite:
            return qpow(x, n) * qhyper({qmn, 0.0}, {}, q, qn / (x * x));
    }
    throw domain_error("qpoly_series: unknown family");
}

// One step of each three-term recurrence solved for the (n+1)-st member.
// v is the recurrence eigen-argument (z + 1/z for the z-families, x or -x
// for the x-families, following each family's relation).
inline cplx qpoly_recurrence(QPolyFamily f, int N, const std::vector<cplx>& p,
                             cplx q, cplx x) {
    cplx prev(0.0, 0.0), cur(1.0, 0.0); // degree -1 and 0
    for (int n = 0; n < N; ++n) {
        const cplx qn = qpow(q, n);
        cplx up, diag, down, v;
        switch (f) {
            case QPolyFamily::AskeyWilson: {
                const cplx a = p[0], b = p[1], c = p[2], d = p[3];
                const cplx abcd = a * b * c * d;
                up = (1.0 - a * b * qn) * (1.0 - a * c * qn) *
                     (1.0 - a * d * qn) * (1.0 - abcd * qn / q) /
                     (a * (1.0 - abcd * qn * qn / q) * (1.0 - abcd * qn * qn));
                down = a * (1.0 - qn) * (1.0 - b * c * qn / q) *
                       (1.0 - b * d * qn / q) * (1.0 - c * d * qn / q) /
                       ((1.0 - abcd * qn * qn / (q * q)) *
                        (1.0 - abcd * qn * qn / q));
                diag = a + 1.0 / a - up - down;
                v = x + 1.0 / x;
                break;
            }
            case QPolyFamily::ContinuousDualQHahn: {
                const cplx a = p[0], b = p[1], c = p[2];
                up = (1.0 - a * b * qn) * (1.0 - a * c * qn) / a;
                down = a * (1.0 - qn) * (1.0 - b * c * qn / q);
                diag = a + 1.0 / a - up - down;
                v = x + 1.0 / x;
                break;
            }
            case QPolyFamily::BigQJacobi: {
                const cplx a = p[0], b = p[1], c = p[2];
                const cplx ab = a * b;
                up = (1.0 - a * qn * q) * (1.0 - ab * qn * q) *
                     (1.0 - c * qn * q) /
                     ((1.0 - ab * qn * qn * q) * (1.0 - ab * qn * qn * q * q));
                down = -a * c * qn * q * (1.0 - qn) * (1.0 - ab * qn / c) *
                       (1.0 - b * qn) /
                       ((1.0 - ab * qn * qn) * (1.0 - ab * qn * qn * q));
                diag = 1.0 - up - down;
                v = x;
                break;
            }
            case QPolyFamily::AlSalamChihara: {
                const cplx a = p[0], b = p[1];
                up = 1.0 / a - b * qn;
                diag = (a + b) * qn;
                down = a * (1.0 - qn);
                v = x + 1.0 / x;
                break;
            }
            case QPolyFamily::LittleQJacobi_Y: {
                const cplx a = p[0], b = p[1];
                const cplx ab = a * b;
                up = (1.0 - a * qn * q) * (1.0 - ab * qn * q) /
                     ((1.0 - ab * qn * qn * q) * (1.0 - ab * qn * qn * q * q));
                down = qn * qn * q * a * a * b * (1.0 - qn) * (1.0 - b * qn) /
                       ((1.0 - ab * qn * qn) * (1.0 - ab * qn * qn * q));
                diag = 1.0 - up - down;
                v = x;
                break;
            }
            case QPolyFamily::BigQLaguerre: {
                const cplx a = p[0], b = p[1];
                up = (1.0 - a * qn * q) * (1.0 - b * qn * q);
                down = -a * b * qn * q * (1.0 - qn);
                diag = 1.0 - up - down;
                v = x;
                break;
            }
            case QPolyFamily::LittleQLaguerre: {
                const cplx a = p[0];
                up = qn * (1.0 - a * qn * q);
                down = a * qn * (1.0 - qn);
                diag = -(up + down);
                v = -x;
                break;
            }
            case QPolyFamily::ContBigQHermite: {
                const cplx a = p[0];
                up = 1.0 / a;
                diag = a * qn;
                down = a * (1.0 - qn);
                v = x + 1.0 / x;
                break;
            }
            case QPolyFamily::ContQHermite: {
                up = 1.0;
                diag = 0.0;
                down = 1.0 - qn;
                v = x + 1.0 / x;
                break;
            }
            default:
                throw domain_error(
                    "qpoly_recurrence: no recurrence for this family");
        }
        cplx next = ((v - diag) * cur - down * prev) / up;
        prev = cur;
        cur = next;
    }
    return cur;
}

} // namespace detail

// Evaluate a family member of degree n at argument x with parameters p.
// The two modes are algorithmically independent and cross-check each other.
inline cplx qpoly_eval(QPolyFamily f, int n, const std::vector<cplx>& p, cplx q,
                       cplx x, QPolyMode mode = QPolyMode::series) {
    if (n < 0) throw domain_error("qpoly_eval: negative degree");
    detail::expect_params(f, p);
    if (mode == QPolyMode::series) return detail::qpoly_series(f, n, p, q, x);
    if (f == QPolyFamily::LittleQJacobi_p) {
        // p_n through Y_n with swapped parameters:
        // p_n(x;a,b,q) = (-qb)^{-n} q^{-n(n-1)/2} (qb;q)_n/(qa;q)_n
        //                 Y_n(qbx; b, a, q)
        const cplx a = p[0], b = p[1];
        cplx pref = 1.0;
        for (int k = 0; k < n; ++k) pref /= (-q * b) * detail::qpow(q, k);
        pref *= qpoch(q * b, q, n) / qpoch(q * a, q, n);
        return pref *
               detail::qpoly_recurrence(QPolyFamily::LittleQJacobi_Y, n,
                                        {b, a}, q, q * b * x);
    }
    return detail::qpoly_recurrence(f, n, p, q, x);
}

enum class DualityKind {
    askey_wilson,        // R_n <-> R_m with tilded parameters
    hahn_jacobi,         // H_n <-> J_m
    chihara_littlejacobi // S_n <-> Y_m
};

struct DualityPair {
    cplx lhs, rhs;
};

// Evaluate both sides of a duality relation at the lattice arguments.
inline DualityPair qpoly_duality(DualityKind kind, int n, int m,
                                 const std::vector<cplx>& p, cplx q,
                                 QPolyMode mode = QPolyMode::series) {
    DualityPair out;
    const cplx qm = detail::qpow(q, m), qn = detail::qpow(q, n);
    switch (kind) {
        case DualityKind::askey_wilson: {
            if (p.size() != 4) throw domain_error("duality: need 4 parameters");
            const cplx a = p[0], b = p[1], c = p[2], d = p[3];
            // dual parameters: at^2 = abcd/q, at*bt = ab, at*ct = ac,
            // at*dt = ad; both square roots give the same R_m
            const cplx at = std::sqrt(a * b * c * d / q);
            out.lhs = qpoly_eval(QPolyFamily::AskeyWilson, n, p, q,
                                 1.0 / (a * qm), mode);
            out.rhs = qpoly_eval(QPolyFamily::AskeyWilson, m,
                                 {at, a * b / at, a * c / at, a * d / at}, q,
                                 1.0 / (at * qn), mode);
            break;
        }
        case DualityKind::hahn_jacobi: {
            if (p.size() != 3) throw domain_error("duality: need 3 parameters");
            const cplx a = p[0], b = p[1], c = p[2];
            out.lhs = qpoly_eval(QPolyFamily::ContinuousDualQHahn, n, p, q,
                                 1.0 / (a * qm), mode);
            out.rhs = qpoly_eval(QPolyFamily::BigQJacobi, m,
                                 {a * b / q, a / b, a * c / q}, q, 1.0 / qn,
                                 mode);
            break;
        }
        case DualityKind::chihara_littlejacobi: {
            if (p.size() != 2) throw domain_error("duality: need 2 parameters");
            const cplx a = p[0], b = p[1];
            out.lhs = qpoly_eval(QPolyFamily::AlSalamChihara, n, p, q,
                                 1.0 / (a * qm), mode);
            // first dual parameter is q^{-1} a b (a q^{-n} variant only
            // matches numerically at n = 1; cf. the hahn_jacobi analogue)
            out.rhs = qpoly_eval(QPolyFamily::LittleQJacobi_Y, m,
                                 {a * b / q, a / b}, q, 1.0 / qn, mode);
            break;
        }
    }
    return out;
}

} // namespace hypgeo

#endif
