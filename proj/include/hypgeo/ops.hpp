#ifndef HYPGEO_OPS_HPP
#define HYPGEO_OPS_HPP

// Difference operators attached to each scheme member, represented as data:
// a list of (coefficient closure, variable shift) terms plus the eigenvalue
// the member function realizes. "primary" variants act on the first variable
// with eigenvalue determined by the second; "dual" variants act on the second
// variable with eigenvalue determined by the first; "_binv" variants replace
// b by 1/b in every coefficient, shift, and eigenvalue; "sqrt" variants are
// the half-shift square root available for member Q only.

#include <functional>
#include <string>
#include <vector>

#include "bcontext.hpp"
#include "common.hpp"
#include "scheme.hpp"

namespace hypgeo {

enum class OpVariant {
    primary,
    primary_binv,
    dual,
    dual_binv,
    sqrt,
    sqrt_binv,
};

inline std::string variant_name(OpVariant v) {
    switch (v) {
        case OpVariant::primary: return "primary";
        case OpVariant::primary_binv: return "primary_binv";
        case OpVariant::dual: return "dual";
        case OpVariant::dual_binv: return "dual_binv";
        case OpVariant::sqrt: return "sqrt";
        case OpVariant::sqrt_binv: return "sqrt_binv";
    }
    return "?";
}

inline bool variant_is_binv(OpVariant v) {
    return v == OpVariant::primary_binv || v == OpVariant::dual_binv ||
           v == OpVariant::sqrt_binv;
}

inline bool variant_is_dual(OpVariant v) {
    return v == OpVariant::dual || v == OpVariant::dual_binv;
}

struct OpTerm {
    cplx shift;                        // added to the acted variable
    std::function<cplx(cplx)> coeff;   // evaluated at the unshifted variable
};

struct ShiftOperatorSpec {
    Member member = Member::R;
    OpVariant variant = OpVariant::primary;
    int acts_on = 1;                   // 1 = first variable, 2 = second
    std::string variable;              // display name of the acted variable
    std::vector<OpTerm> terms;
    cplx eigenvalue{0.0, 0.0};
    // zeros of these functions are coefficient poles (sinh denominators)
    std::vector<std::function<cplx(cplx)>> singular_dens;
};

// Eq. (diffeqtildeM2) prints the 1/b dual eigenvalue of the lowest member
// with the opposite sign from its b counterpart; both candidates are exposed
// so the verifier can adjudicate numerically (minus is the default).
enum class MDualSign { minus, plus };

namespace detail {

inline cplx csinh(cplx z) { return std::sinh(z); }
inline cplx ccosh(cplx z) { return std::cosh(z); }

} // namespace detail

inline ShiftOperatorSpec build_operator(const BContext& ctx, Member m,
                                        OpVariant variant,
                                        const SchemeParams& p,
                                        MDualSign m_dual_sign = MDualSign::minus) {
    using detail::ccosh;
    using detail::csinh;
    if ((variant == OpVariant::sqrt || variant == OpVariant::sqrt_binv) &&
        m != Member::Q)
        throw domain_error("build_operator: sqrt variants exist only for Q");
    if (static_cast<int>(p.thetas.size()) != member_theta_count(m))
        throw domain_error("build_operator: wrong number of theta parameters");

    const bool binv = variant_is_binv(variant);
    const bool dual = variant_is_dual(variant);
    const double B = binv ? 1.0 / ctx.b : ctx.b; // operator's own b argument
    const double Q = ctx.Q();
    const cplx ib2 = iu * B / 2.0;
    const cplx sh = iu * B; // unit shift e^{iB d/dv}

    ShiftOperatorSpec op;
    op.member = m;
    op.variant = variant;
    op.acts_on = dual ? 2 : 1;

    auto C = [B](cplx z) { return std::cosh(pi * B * z); };
    auto S = [B](cplx z) { return std::sinh(pi * B * z); };
    auto E = [B](cplx z) { return std::exp(pi * B * z); };

    // shared sinh denominator pattern of the first-variable operators
    auto sinh_dens = [&](ShiftOperatorSpec& o) {
        o.singular_dens = {[S](cplx s) { return S(2.0 * s); },
                           [S, ib2](cplx s) { return S(2.0 * s + ib2 * 2.0); }};
    };

    switch (m) {
        case Member::R: {
            // four-parameter top member: both variants share one coefficient
            // shape with the roles of the outer thetas exchanged
            cplx t1 = p.thetas[0], tt = p.thetas[1], ti = p.thetas[2],
                 t0 = p.thetas[3];
            if (dual) std::swap(t1, t0);
            const cplx other = dual ? p.v1 : p.v2;
            auto Hp = [=](cplx s) {
                return -4.0 * C(ib2 + tt + s + t0) * C(ib2 + tt + s - t0) *
                       C(ib2 + t1 + s + ti) * C(ib2 + t1 + s - ti) /
                       (S(2.0 * s) * S(2.0 * s + 2.0 * ib2));
            };
            auto H0 = [=](cplx s) {
                return -2.0 * C(2.0 * (t1 + tt + ib2)) - Hp(s) - Hp(-s);
            };
            op.variable = dual ? "sigma_t" : "sigma_s";
            op.terms = {{sh, Hp},
                        {-sh, [Hp](cplx s) { return Hp(-s); }},
                        {cplx(0.0, 0.0), H0}};
            op.eigenvalue = 2.0 * std::cosh(2.0 * pi * B * other);
            sinh_dens(op);
            break;
        }
        case Member::H: {
            const cplx t0 = p.thetas[0], tt = p.thetas[1], ts = p.thetas[2];
            if (!dual) {
                auto Hp = [=](cplx s) {
                    return -2.0 * E(-(s + ib2)) * C(ib2 + ts + s) *
                           C(ib2 + tt + s + t0) * C(ib2 + tt + s - t0) /
                           (S(2.0 * s + 2.0 * ib2) * S(2.0 * s));
                };
                auto H0 = [=](cplx s) {
                    return E(-(iu * Q + ts + 2.0 * tt)) - Hp(s) - Hp(-s);
                };
                op.variable = "sigma_s";
                op.terms = {{sh, Hp},
                            {-sh, [Hp](cplx s) { return Hp(-s); }},
                            {cplx(0.0, 0.0), H0}};
                op.eigenvalue = std::exp(-2.0 * pi * B * p.v2);
                sinh_dens(op);
            } else {
                auto Hpm = [=](double sgn, cplx nu) {
                    return -4.0 * E(2.0 * nu) * E(-sgn * (t0 + tt)) *
                           C(ib2 + t0 + sgn * (nu + ts / 2.0)) *
                           C(ib2 + tt + sgn * (nu - ts / 2.0));
                };
                auto H0 = [=](cplx nu) {
                    return -2.0 * C(2.0 * (ib2 + t0 + tt)) - Hpm(+1.0, nu) -
                           Hpm(-1.0, nu);
                };
                op.variable = "nu";
                op.terms = {{sh, [Hpm](cplx nu) { return Hpm(+1.0, nu); }},
                            {-sh, [Hpm](cplx nu) { return Hpm(-1.0, nu); }},
                            {cplx(0.0, 0.0), H0}};
                op.eigenvalue = 2.0 * std::cosh(2.0 * pi * B * p.v1);
            }
            break;
        }
        case Member::S: {
            const cplx t0 = p.thetas[0], tt = p.thetas[1];
            if (!dual) {
                auto Hp = [=](cplx s) {
                    return E(-(2.0 * s + iu * Q)) * C(ib2 + t0 + tt + s) *
                           C(ib2 - t0 + tt + s) /
                           (S(2.0 * s + 2.0 * ib2) * S(2.0 * s));
                };
                auto H0 = [=](cplx s) {
                    return E(-(2.0 * tt + iu * Q)) - Hp(s) - Hp(-s);
                };
                op.variable = "sigma_s";
                op.terms = {{sh, Hp},
                            {-sh, [Hp](cplx s) { return Hp(-s); }},
                            {cplx(0.0, 0.0), H0}};
                op.eigenvalue = std::exp(-2.0 * pi * B * p.v2);
                sinh_dens(op);
            } else {
                auto Hpm = [=](double sgn, cplx rho) {
                    return -2.0 * E(rho) * E(-sgn * (ib2 + 2.0 * t0 + tt)) *
                           C(ib2 + tt + sgn * rho);
                };
                auto H0 = [=](cplx rho) {
                    return -2.0 * C(2.0 * (ib2 + t0 + tt)) - Hpm(+1.0, rho) -
                           Hpm(-1.0, rho);
                };
                op.variable = "rho";
                op.terms = {{sh, [Hpm](cplx r) { return Hpm(+1.0, r); }},
                            {-sh, [Hpm](cplx r) { return Hpm(-1.0, r); }},
                            {cplx(0.0, 0.0), H0}};
                op.eigenvalue = 2.0 * std::cosh(2.0 * pi * B * p.v1);
            }
            break;
        }
        case Member::X: {
            const cplx th = p.thetas[0];
            if (!dual) {
                auto Hp = [=](cplx s) {
                    return -E(-1.5 * (2.0 * s + iu * B)) * C(ib2 + th + s) /
                           (2.0 * S(2.0 * s) * S(2.0 * s + 2.0 * ib2));
                };
                auto H0 = [=](cplx s) {
                    return E(-(th + iu * Q)) - Hp(s) - Hp(-s);
                };
                op.variable = "sigma_s";
                op.terms = {{sh, Hp},
                            {-sh, [Hp](cplx s) { return Hp(-s); }},
                            {cplx(0.0, 0.0), H0}};
                op.eigenvalue = std::exp(-2.0 * pi * B * p.v2);
                sinh_dens(op);
            } else {
                auto Hplus = [=](cplx) { return E(-2.0 * (th + iu * Q / 2.0)); };
                auto Hminus = [=](cplx w) {
                    return -2.0 * E(ib2 + 1.5 * th + w) * C(ib2 + th / 2.0 - w);
                };
                auto H0 = [=](cplx w) { return E(th + 2.0 * w); };
                op.variable = "omega";
                op.terms = {{sh, Hplus}, {-sh, Hminus}, {cplx(0.0, 0.0), H0}};
                op.eigenvalue = 2.0 * std::cosh(2.0 * pi * B * p.v1);
            }
            break;
        }
        case Member::Q: {
            if (variant == OpVariant::sqrt || variant == OpVariant::sqrt_binv) {
                auto Hp = [=](cplx s) {
                    return -E(-(2.0 * s + iu * Q / 2.0)) / (2.0 * S(2.0 * s));
                };
                op.variable = "sigma_s";
                op.terms = {{sh / 2.0, Hp},
                            {-sh / 2.0, [Hp](cplx s) { return Hp(-s); }}};
                op.eigenvalue = std::exp(-pi * B * p.v2);
                op.singular_dens = {[S](cplx s) { return S(2.0 * s); }};
            } else if (!dual) {
                auto Hp = [=](cplx s) {
                    return -std::exp(-2.0 * pi * B * (2.0 * s + iu * B)) /
                           (4.0 * S(2.0 * s) * S(2.0 * s + 2.0 * ib2));
                };
                auto H0 = [=](cplx s) {
                    return std::exp(-iu * pi * B * Q) - Hp(s) - Hp(-s);
                };
                op.variable = "sigma_s";
                op.terms = {{sh, Hp},
                            {-sh, [Hp](cplx s) { return Hp(-s); }},
                            {cplx(0.0, 0.0), H0}};
                op.eigenvalue = std::exp(-2.0 * pi * B * p.v2);
                sinh_dens(op);
            } else {
                auto one = [](cplx) { return cplx(1.0, 0.0); };
                auto Hminus = [=](cplx eta) {
                    return 1.0 + std::exp(2.0 * pi * B * (eta - ib2));
                };
                op.variable = "eta";
                op.terms = {{sh, one}, {-sh, Hminus}};
                op.eigenvalue = 2.0 * std::cosh(2.0 * pi * B * p.v1);
            }
            break;
        }
        case Member::L: {
            const cplx tt = p.thetas[0], th = p.thetas[1];
            if (!dual) {
                auto Hplus = [=](cplx l) {
                    return -4.0 * E(-(th / 2.0 + tt - 2.0 * l)) *
                           C(ib2 + th / 2.0 + l) * C(ib2 - th / 2.0 + tt + l);
                };
                auto Hminus = [=](cplx l) {
                    return -2.0 * E(tt - ib2 + 3.0 * l) *
                           C(ib2 + th / 2.0 + tt - l);
                };
                auto H0 = [=](cplx l) {
                    return E(-(th / 2.0 + 2.0 * tt + iu * Q)) - Hplus(l) -
                           Hminus(l);
                };
                op.variable = "lambda";
                op.terms = {{sh, Hplus}, {-sh, Hminus}, {cplx(0.0, 0.0), H0}};
                op.eigenvalue = std::exp(-2.0 * pi * B * p.v2);
            } else {
                auto Hplus = [=](cplx mu) {
                    return -4.0 * E(-(th / 2.0 + tt - 2.0 * mu)) *
                           C(ib2 + 3.0 * th / 4.0 + mu) *
                           C(ib2 - th / 4.0 + tt + mu);
                };
                auto Hminus = [=](cplx mu) {
                    return -2.0 * E(-ib2 + th / 4.0 + tt + 3.0 * mu) *
                           C(ib2 + th / 4.0 + tt - mu);
                };
                auto H0 = [=](cplx mu) {
                    return E(-(th + 2.0 * tt + iu * Q)) - Hplus(mu) -
                           Hminus(mu);
                };
                op.variable = "mu";
                op.terms = {{sh, Hplus}, {-sh, Hminus}, {cplx(0.0, 0.0), H0}};
                op.eigenvalue = std::exp(-2.0 * pi * B * p.v1);
            }
            break;
        }
        case Member::W: {
            const cplx tt = p.thetas[0];
            if (!dual) {
                auto Hpm = [=](double sgn, cplx k) {
                    return -2.0 * E(3.0 * k) * E(sgn * (ib2 - tt)) *
                           C(ib2 + tt + sgn * k);
                };
                auto H0 = [=](cplx k) {
                    return -Hpm(+1.0, k) - Hpm(-1.0, k);
                };
                op.variable = "kappa";
                op.terms = {{sh, [Hpm](cplx k) { return Hpm(+1.0, k); }},
                            {-sh, [Hpm](cplx k) { return Hpm(-1.0, k); }},
                            {cplx(0.0, 0.0), H0}};
                op.eigenvalue = std::exp(-2.0 * pi * B * p.v2);
            } else {
                auto Hplus = [=](cplx w) {
                    return -2.0 * E(w - ib2 - 2.0 * tt) * C(w + ib2);
                };
                auto Hminus = [=](cplx w) { return -E(2.0 * (tt + w)); };
                auto H0 = [=](cplx w) {
                    return 2.0 * E(2.0 * w) * std::cosh(2.0 * pi * B * tt);
                };
                op.variable = "omega";
                op.terms = {{sh, Hplus}, {-sh, Hminus}, {cplx(0.0, 0.0), H0}};
                op.eigenvalue = std::exp(-2.0 * pi * B * p.v1);
            }
            break;
        }
        case Member::M: {
            if (!dual) {
                auto ident = [=](cplx z) { return E(2.0 * z); };
                auto shifted = [=](cplx z) { return -E(2.0 * z); };
                op.variable = "zeta";
                op.terms = {{cplx(0.0, 0.0), ident}, {sh, shifted}};
                op.eigenvalue = std::exp(-2.0 * pi * B * p.v2);
            } else {
                auto ident = [=](cplx w) { return E(2.0 * w); };
                auto shifted = [=](cplx w) {
                    return -2.0 * E(w - ib2) * C(ib2 + w);
                };
                op.variable = "omega";
                op.terms = {{cplx(0.0, 0.0), ident}, {sh, shifted}};
                const double sgn =
                    (binv && m_dual_sign == MDualSign::plus) ? 1.0 : -1.0;
                op.eigenvalue = std::exp(sgn * 2.0 * pi * B * p.v1);
            }
            break;
        }
    }
    return op;
}

// Sum of coefficient(point) * f(point + shift) over the operator's terms.
template <typename F>
inline cplx apply_operator(const ShiftOperatorSpec& op, F&& f, cplx point) {
    cplx acc(0.0, 0.0);
    for (const OpTerm& t : op.terms) acc += t.coeff(point) * f(point + t.shift);
    return acc;
}

// True when some sinh denominator nearly vanishes at the point.
inline bool operator_singular_at(const ShiftOperatorSpec& op, cplx point,
                                 double tol = 1e-8) {
    for (const auto& den : op.singular_dens)
        if (std::abs(den(point)) < tol) return true;
    return false;
}

// Robust-mode helper: nudge the point off a coefficient pole.
inline cplx regularize_point(const BContext& ctx, const ShiftOperatorSpec& op,
                             cplx point, std::vector<std::string>* warnings,
                             double tol = 1e-8) {
    if (!operator_singular_at(op, point, tol)) return point;
    const cplx moved = point + 1e-6 * ctx.Q();
    if (warnings)
        warnings->push_back("operator " + member_name(op.member) + "/" +
                            variant_name(op.variant) +
                            ": coefficient pole near the sampled point; "
                            "perturbed by 1e-6 Q");
    return moved;
}

} // namespace hypgeo

#endif
