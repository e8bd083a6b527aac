#ifndef HYPGEO_DOUBLE_SINE_HPP
#define HYPGEO_DOUBLE_SINE_HPP

// The double sine function s_b(z) and its combinatorics.
//
// Inside the strip |Im z| < Q/2 it is computed from its defining integral
//
//   ln s_b(z) = i * Int_0^oo dy/y [ sin(2yz) / (2 sinh(y/b) sinh(by)) - z/y ].
//
// Outside the strip the value is reduced into the strip with the shift
// equations s_b(z + i beta/2) = 2 cosh(pi beta z) s_b(z - i beta/2),
// beta in {b, 1/b}, with logarithmic bookkeeping of the accumulated factors.
// For large |Re z| the asymptotic expansion
// ln s_b(z) ~ -/+ (i pi z^2 / 2 + i pi (b^2 + b^-2) / 24) is used instead;
// the crossover is chosen so its truncation error is far below the quadrature
// tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "bcontext.hpp"
#include "common.hpp"
#include "quadrature.hpp"

namespace hypgeo {

struct PointClassification {
    enum Kind { regular, zero, pole } kind = regular;
    int multiplicity = 0;
    double nearest_lattice_distance = 0.0;
};

// z lattice: zeros at iQ/2 + i(mb + l/b), poles mirrored below, m,l >= 0.
inline PointClassification sb_classify(const BContext& ctx, cplx z,
                                       double collision_tol = -1.0) {
    const double Q = ctx.Q();
    if (collision_tol < 0) collision_tol = 1e-8 * Q;
    PointClassification out;
    double best = 1e300;
    const double r = std::abs(z) + Q + 1.0;
    const int mmax = static_cast<int>(r / ctx.b) + 1;
    const int lmax = static_cast<int>(r * ctx.b) + 1;
    for (int sign = -1; sign <= 1; sign += 2) {
        int hits = 0;
        for (int m = 0; m <= mmax; ++m) {
            for (int l = 0; l <= lmax; ++l) {
                cplx p = cplx(0.0, sign * (Q / 2 + m * ctx.b + l / ctx.b));
                double d = std::abs(z - p);
                best = std::min(best, d);
                if (d < collision_tol) ++hits;
            }
        }
        if (hits > 0) {
            out.kind = (sign > 0) ? PointClassification::zero
                                  : PointClassification::pole;
            out.multiplicity = hits;
        }
    }
    out.nearest_lattice_distance = best;
    return out;
}

namespace detail {

// Coefficients d_k of sinh(by) sinh(y/b) / y^2 = sum_k d_k y^{2k}.
inline void sinh_product_coeffs(double b, int K, std::vector<double>& d) {
    d.assign(K + 1, 0.0);
    std::vector<double> inv_odd_fact(2 * K + 2);
    inv_odd_fact[0] = 1.0; // 1/(1)!
    double f = 1.0;
    for (int j = 0; j <= K; ++j) {
        if (j > 0) f *= (2.0 * j) * (2.0 * j + 1.0); // (2j+1)!
        inv_odd_fact[j] = 1.0 / f;
    }
    for (int k = 0; k <= K; ++k)
        for (int m = 0; m <= k; ++m)
            d[k] += std::pow(b, 2 * (2 * m - k)) * inv_odd_fact[m] *
                    inv_odd_fact[k - m];
}

// Integrand of the exponent, stable for all y > 0. For small y the direct
// expression suffers catastrophic cancellation between sin(2yz)/(2 sinh sinh)
// and z/y, so below y_switch it is evaluated through the series of
// (S - D)/(y^2 D) whose k = 0 terms cancel exactly.
struct SbExponentIntegrand {
    double b;
    cplx z;
    double y_switch;
    std::vector<double> d; // series coefficients of the sinh product

    SbExponentIntegrand(const BContext& ctx, cplx z_) : b(ctx.b), z(z_) {
        y_switch = std::min(0.05, 0.5 / (1.0 + 2.0 * std::abs(z)));
        sinh_product_coeffs(b, 12, d);
    }

    cplx operator()(double y) const {
        if (y > y_switch) {
            return (std::sin(2.0 * y * z) /
                        (2.0 * std::sinh(y / b) * std::sinh(b * y)) -
                    z / y) /
                   y;
        }
        const cplx w2 = -4.0 * z * z; // sin-series ratio; y^...: carried by ypow
        cplx s_term(1.0, 0.0), diff(0.0, 0.0);
        double D = 0.0, ypow = 1.0;
        for (std::size_t k = 0; k + 1 < d.size(); ++k) {
            D += d[k] * ypow;
            diff += (s_term - d[k]) * ypow; // (S - D)/1, k = 0 term vanishes
            s_term *= w2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            ypow *= y * y;
        }
        return z * diff / (y * y * D);
    }
};

} // namespace detail

// log of s_b(z) strictly inside the strip; tol is the absolute tolerance on
// the exponent.
inline cplx ln_sb_strip(const BContext& ctx, cplx z, double tol = 1e-12) {
    const double Q = ctx.Q();
    if (std::fabs(z.imag()) >= Q / 2)
        throw domain_error("ln_sb_strip: z outside the strip |Im z| < Q/2");
    const detail::SbExponentIntegrand f(ctx, z);
    // decay rate of the oscillatory part of the integrand
    const double rate = Q - 2.0 * std::fabs(z.imag());
    const double Y = std::max(4.0, (std::log(1.0 / tol) + 6.0 +
                                    2.0 * std::log1p(std::abs(z))) /
                                       rate);
    // panel section points chosen so oscillation (frequency 2 Re z in y) is
    // resolved with few bisections
    std::vector<double> pts{0.0, f.y_switch};
    const double freq = std::max(1.0, 2.0 * std::abs(z.real()));
    double step = std::max(2.0 * pi / freq, Y / 64.0);
    for (double y = f.y_switch + step; y < Y; y += step) pts.push_back(y);
    pts.push_back(Y);
    cplx J(0.0, 0.0);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        J += integrate_adaptive(f, pts[k], pts[k + 1],
                                tol / static_cast<double>(pts.size()))
                 .value;
    J += -z / Y; // analytic tail of the -z/y^2 subtraction
    return iu * J;
}

// log(2 cosh w) without overflow for large |Re w|.
inline cplx ln_2cosh(cplx w) {
    if (w.real() < 0) w = -w;
    if (w.real() > 20.0) return w; // correction log1p(e^{-2w}) below 1e-17
    return std::log(2.0 * std::cosh(w));
}

namespace detail {

// Coefficients of the tail expansion, obtained by matching powers of
// u = e^{-2 pi b z}, v = e^{-2 pi z / b} in the two shift equations:
//   s_b(z) = e^{-i pi z^2/2 - i pi K} (1 + A u + B v + C u^2 + D uv + E v^2
//            + O(third order)),   Re z -> +infinity.
struct SbTailCoeffs {
    cplx A, B, C, D, E;
    double threshold; // |Re z| beyond which the truncation is below 1e-16
    bool usable;      // false when b^2 sits on a small-denominator resonance
};

inline SbTailCoeffs sb_tail_coeffs(const BContext& ctx) {
    SbTailCoeffs c{};
    const double b2 = ctx.b * ctx.b, bi2 = 1.0 / b2;
    const double s1 = std::sin(pi * b2), s2 = std::sin(2.0 * pi * b2);
    const double t1 = std::sin(pi * bi2), t2 = std::sin(2.0 * pi * bi2);
    const double eps = 1e-2;
    c.usable = std::fabs(s1) > eps && std::fabs(s2) > eps &&
               std::fabs(t1) > eps && std::fabs(t2) > eps;
    if (!c.usable) return c;
    c.A = iu / (2.0 * s1);
    c.B = iu / (2.0 * t1);
    c.C = c.A * iu * std::exp(iu * pi * b2) / (2.0 * s2);
    c.D = c.A * c.B;
    c.E = c.B * iu * std::exp(iu * pi * bi2) / (2.0 * t2);
    // third-order terms decay at least at rate 2 pi min(3b, 2b + 1/b, ...)
    const double r3 =
        2.0 * pi * std::min({3.0 * ctx.b, 2.0 * ctx.b + 1.0 / ctx.b,
                             ctx.b + 2.0 / ctx.b, 3.0 / ctx.b});
    const double cmax =
        std::max({std::abs(c.A), std::abs(c.B), std::abs(c.C), std::abs(c.D),
                  std::abs(c.E), 1.0});
    c.threshold = std::max(2.0, (38.0 + std::log(cmax)) / r3);
    return c;
}

// ln(1 + corrections) of the tail expansion; valid for Re z > threshold.
inline cplx sb_tail_log_corr(const BContext& ctx, const SbTailCoeffs& c,
                             cplx z) {
    const cplx u = std::exp(-2.0 * pi * ctx.b * z);
    const cplx v = std::exp(-2.0 * pi * z / ctx.b);
    return clog1p(c.A * u + c.B * v + c.C * u * u + c.D * u * v +
                  c.E * v * v);
}

} // namespace detail

// log of s_b at any z (principal value up to an additive multiple of 2 pi i
// inherited from the shift-equation bookkeeping; exp of it is exact).
inline cplx ln_sb(const BContext& ctx, cplx z, double tol = 1e-12) {
    const double Q = ctx.Q();
    const detail::SbTailCoeffs tc = detail::sb_tail_coeffs(ctx);
    const double thr =
        tc.usable ? tc.threshold : std::max(8.0, 5.0 * ctx.bmax());
    if (std::fabs(z.real()) > thr) {
        if (z.real() < 0) return -ln_sb(ctx, -z, tol); // inversion, exact
        const cplx lead =
            -iu * pi * z * z / 2.0 -
            iu * pi * (ctx.b * ctx.b + 1.0 / (ctx.b * ctx.b)) / 24.0;
        return tc.usable ? lead + detail::sb_tail_log_corr(ctx, tc, z) : lead;
    }
    // ladder into the band |Im z| <= step/2, step = max(b, 1/b)
    const double step = ctx.bmax();
    cplx logfac(0.0, 0.0);
    int guard = 0;
    while (std::fabs(z.imag()) > step / 2 + 1e-15) {
        if (++guard > 1000)
            throw numerical_error("ln_sb: shift ladder failed to converge");
        if (z.imag() > 0) {
            // s_b(z) = 2 cosh(pi step (z - i step/2)) s_b(z - i step)
            logfac += ln_2cosh(pi * step * (z - iu * step / 2.0));
            z -= iu * step;
        } else {
            // s_b(z) = s_b(z + i step) / (2 cosh(pi step (z + i step/2)))
            logfac -= ln_2cosh(pi * step * (z + iu * step / 2.0));
            z += iu * step;
        }
    }
    (void)Q;
    return logfac + ln_sb_strip(ctx, z, tol);
}

inline cplx sb(const BContext& ctx, cplx z, double tol = 1e-12) {
    return std::exp(ln_sb(ctx, z, tol));
}

// Closed-form iterated shift: s_b(x + i m beta) / s_b(x) with beta = b or 1/b,
//   = e^{-pi beta m (2x + i beta m)/2} (-e^{i pi beta^2} e^{2 pi beta x}; q)_m,
// q = e^{2 i pi beta^2}. Entire in x, so it stays finite at lattice points
// shared by numerator and denominator. Negative m is handled through the
// reciprocal identity.
inline cplx sb_shift_ratio(const BContext& ctx, cplx x, int m,
                           bool use_binv = false) {
    const double beta = use_binv ? 1.0 / ctx.b : ctx.b;
    if (m < 0) {
        cplx r = sb_shift_ratio(ctx, x + cplx(0.0, m * beta), -m, use_binv);
        return 1.0 / r;
    }
    cplx expo = std::exp(-pi * beta * static_cast<double>(m) *
                         (2.0 * x + iu * beta * static_cast<double>(m)) / 2.0);
    cplx poch(1.0, 0.0);
    const cplx a = std::exp(iu * pi * beta * beta + 2.0 * pi * beta * x);
    const cplx q = std::exp(2.0 * iu * pi * beta * beta);
    cplx qk(1.0, 0.0);
    for (int k = 0; k < m; ++k) {
        poch *= 1.0 + a * qk;
        qk *= q;
    }
    return expo * poch;
}

// Residue of s_b at the pole p_{m,l} = -iQ/2 - i(mb + l/b), expressed as
// (i/2pi) times the finite ratio s_b(z - i(mb + l/b)) / s_b(z) at z -> -iQ/2.
inline cplx sb_residue(const BContext& ctx, int m, int l) {
    const cplx p00 = cplx(0.0, -ctx.Q() / 2);
    const cplx u = p00 - iu * (m * ctx.b + l / ctx.b);
    // s_b(u)/s_b(u + i(mb + l/b)) via two iterated shifts
    cplx up = sb_shift_ratio(ctx, u + iu * (static_cast<double>(l) / ctx.b), m,
                             false) *
              sb_shift_ratio(ctx, u, l, true);
    return (iu / (2.0 * pi)) / up;
}

} // namespace hypgeo

#endif
