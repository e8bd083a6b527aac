#ifndef HYPGEO_SCHEME_HPP
#define HYPGEO_SCHEME_HPP

// The eight contour-integral functions of the non-polynomial ladder, each of
// the form  prefactor * \int I(x) dx  with
//   I(x) = exp(c0 + c1 x + c2 x^2) * prod s_b(x + num_j) / prod s_b(x + den_j).
// Evaluation routes:
//  (a) plain: a separating contour whose tail heights satisfy the decay
//      conditions exists -> auto_contour + integrate_contour;
//  (b) counterterm: a tail is non-decaying (or too slow). On such a side the
//      integrand approaches e^{c0s + c1s x} (1 + a_b e^{-+2 pi b x} + ...);
//      the slow terms are subtracted and integrated in closed form, valid for
//      all exponents by analytic continuation. This implements the
//      meromorphic extension beyond the native convergence domain.
//  (c) recurrence (second variable, deep extension): used by the eta variable
//      of the Gaussian-kernel member, whose counterterm reach is bounded.
// Lattice values use the residue-deformation representation: the prefactor
// zero cancels each residue pole through the entire finite ratio
// sb_shift_ratio, never a numerical 0/0.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bcontext.hpp"
#include "common.hpp"
#include "contour.hpp"
#include "double_sine.hpp"
#include "qseries.hpp"

namespace hypgeo {

enum class Member { R, H, S, X, Q, L, W, M };

inline std::string member_name(Member m) {
    switch (m) {
        case Member::R: return "R";
        case Member::H: return "H";
        case Member::S: return "S";
        case Member::X: return "X";
        case Member::Q: return "Q";
        case Member::L: return "L";
        case Member::W: return "W";
        case Member::M: return "M";
    }
    return "?";
}

inline Member member_from_name(const std::string& s) {
    for (Member m : {Member::R, Member::H, Member::S, Member::X, Member::Q,
                     Member::L, Member::W, Member::M})
        if (member_name(m) == s) return m;
    throw domain_error("unknown member name: " + s);
}

inline int member_theta_count(Member m) {
    switch (m) {
        case Member::R: return 4;
        case Member::H: return 3;
        case Member::S: return 2;
        case Member::X: return 1;
        case Member::Q: return 0;
        case Member::L: return 2;
        case Member::W: return 1;
        case Member::M: return 0;
    }
    return 0;
}

inline std::vector<std::string> member_theta_names(Member m) {
    switch (m) {
        case Member::R: return {"theta1", "thetat", "thetainf", "theta0"};
        case Member::H: return {"theta0", "thetat", "thetastar"};
        case Member::S: return {"theta0", "thetat"};
        case Member::X: return {"theta"};
        case Member::Q: return {};
        case Member::L: return {"thetat", "theta"};
        case Member::W: return {"thetat"};
        case Member::M: return {};
    }
    return {};
}

inline std::pair<std::string, std::string> member_var_names(Member m) {
    switch (m) {
        case Member::R: return {"sigma_s", "sigma_t"};
        case Member::H: return {"sigma_s", "nu"};
        case Member::S: return {"sigma_s", "rho"};
        case Member::X: return {"sigma_s", "omega"};
        case Member::Q: return {"sigma_s", "eta"};
        case Member::L: return {"lambda", "mu"};
        case Member::W: return {"kappa", "omega"};
        case Member::M: return {"zeta", "omega"};
    }
    return {"v1", "v2"};
}

struct SchemeParams {
    std::vector<cplx> thetas; // order per member_theta_names
    cplx v1{0.0, 0.0};
    cplx v2{0.0, 0.0};
};

struct IntegrandSpec {
    cplx c0{0.0, 0.0}, c1{0.0, 0.0}, c2{0.0, 0.0};
    std::vector<cplx> num; // s_b(x + s) in the numerator
    std::vector<cplx> den; // s_b(x + s) in the denominator
};

struct MemberSpec {
    cplx pref_phase{0.0, 0.0};  // explicit exponent multiplying the prefactor
    std::vector<cplx> pref_sb;  // s_b arguments multiplying the prefactor
    IntegrandSpec ig;
};

inline MemberSpec build_member(const BContext& ctx, Member m,
                               const SchemeParams& p) {
    if (static_cast<int>(p.thetas.size()) != member_theta_count(m))
        throw domain_error("build_member: wrong number of theta parameters");
    const cplx iQ2 = iu * ctx.Q() / 2.0;
    MemberSpec s;
    switch (m) {
        case Member::R: {
            const cplx t1 = p.thetas[0], tt = p.thetas[1], ti = p.thetas[2],
                       t0 = p.thetas[3], ss = p.v1, st = p.v2;
            s.pref_sb = {iQ2 + 2.0 * tt,
                         iQ2 + t0 + t1 + ti + tt,
                         iQ2 + t0 + t1 - ti + tt,
                         ss - t0 - tt,
                         -ss - t0 - tt,
                         st - t1 - tt,
                         -st - t1 - tt};
            s.ig.num = {t0 + tt + ss, t0 + tt - ss, t1 + tt + st, t1 + tt - st};
            s.ig.den = {iQ2, iQ2 + 2.0 * tt, iQ2 + t0 + t1 + ti + tt,
                        iQ2 + t0 + t1 - ti + tt};
            break;
        }
        case Member::H: {
            const cplx t0 = p.thetas[0], tt = p.thetas[1], ts = p.thetas[2],
                       ss = p.v1, nu = p.v2;
            s.pref_sb = {2.0 * tt + iQ2, t0 + ts + tt + iQ2,
                         nu - ts / 2.0 - tt, ss - t0 - tt, -ss - t0 - tt};
            s.ig.c1 = iu * pi * (ts / 2.0 - t0 + nu - iQ2);
            s.ig.num = {ts / 2.0 + tt - nu, t0 + tt + ss, t0 + tt - ss};
            s.ig.den = {iQ2, 2.0 * tt + iQ2, t0 + ts + tt + iQ2};
            break;
        }
        case Member::S: {
            const cplx t0 = p.thetas[0], tt = p.thetas[1], ss = p.v1,
                       rho = p.v2;
            s.pref_sb = {2.0 * tt + iQ2, rho - tt, ss - t0 - tt, -ss - t0 - tt};
            s.ig.c2 = -iu * pi / 2.0;
            s.ig.c1 = -iu * pi * (2.0 * iQ2 + 2.0 * t0 + tt - rho);
            s.ig.num = {tt - rho, t0 + tt + ss, t0 + tt - ss};
            s.ig.den = {iQ2, iQ2 + 2.0 * tt};
            break;
        }
        case Member::X: {
            const cplx th = p.thetas[0], ss = p.v1, om = p.v2;
            s.pref_sb = {om - th / 2.0, ss - th, -ss - th};
            s.ig.c2 = -iu * pi;
            s.ig.c1 = -iu * pi * (2.5 * th + 3.0 * iQ2 - om);
            s.ig.num = {th / 2.0 - om, th + ss, th - ss};
            s.ig.den = {iQ2};
            break;
        }
        case Member::Q: {
            const cplx ss = p.v1, eta = p.v2;
            const double Q = ctx.Q();
            s.pref_phase = iu * pi *
                           (1.0 / 6.0 + 7.0 * Q * Q / 24.0 - eta * eta / 2.0 +
                            iu * eta * Q - ss * ss);
            s.pref_sb = {eta};
            s.ig.c2 = -iu * pi;
            s.ig.c1 = 2.0 * iu * pi * (eta - iQ2);
            s.ig.num = {ss, -ss};
            break;
        }
        case Member::L: {
            const cplx tt = p.thetas[0], th = p.thetas[1], la = p.v1,
                       mu = p.v2;
            s.pref_sb = {2.0 * tt + iQ2, th + tt + iQ2, la - th / 2.0 - tt,
                         mu - th / 4.0 - tt};
            s.ig.c2 = iu * pi / 2.0;
            s.ig.c1 = iu * pi * (th / 4.0 + tt + la + mu - iQ2);
            s.ig.num = {th / 2.0 + tt - la, th / 4.0 + tt - mu};
            s.ig.den = {iQ2, 2.0 * tt + iQ2, th + tt + iQ2};
            break;
        }
        case Member::W: {
            const cplx tt = p.thetas[0], ka = p.v1, om = p.v2;
            s.pref_sb = {iQ2 + 2.0 * tt, ka - tt};
            s.ig.c2 = iu * pi / 2.0;
            s.ig.c1 = iu * pi * (tt + ka + 2.0 * om);
            s.ig.num = {tt - ka};
            s.ig.den = {iQ2, 2.0 * tt + iQ2};
            break;
        }
        case Member::M: {
            const cplx ze = p.v1, om = p.v2;
            s.pref_sb = {ze};
            s.ig.c1 = iu * pi * (ze - iQ2 + 2.0 * om);
            s.ig.num = {-ze};
            s.ig.den = {iQ2};
            break;
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Side asymptotics: on a horizontal tail the integrand behaves as
//   exp(c0s + c1s x + c2s x^2) (1 + a_b e^{-+2 pi b x} + a_binv e^{-+2 pi x/b})
// with all coefficients determined by the factor shifts.
// ---------------------------------------------------------------------------

struct SideAsym {
    cplx c0{0.0, 0.0}, c1{0.0, 0.0}, c2{0.0, 0.0};
    cplx a_b{0.0, 0.0}, a_binv{0.0, 0.0};
};

inline SideAsym side_asym(const BContext& ctx, const IntegrandSpec& ig,
                          int side) {
    const double b = ctx.b;
    const double K = (b * b + 1.0 / (b * b)) / 24.0;
    cplx S1(0.0, 0.0), S2(0.0, 0.0), Eb(0.0, 0.0), Ei(0.0, 0.0);
    double N = 0.0;
    const double sgn = (side > 0) ? 1.0 : -1.0;
    auto acc = [&](const std::vector<cplx>& v, double w) {
        for (cplx sft : v) {
            N += w;
            S1 += w * sft;
            S2 += w * sft * sft;
            Eb += w * std::exp(sgn * 2.0 * pi * b * sft * (-1.0));
            Ei += w * std::exp(sgn * 2.0 * pi * sft * (-1.0) / b);
        }
    };
    // right: e^{-2 pi b (x+s)} -> weight e^{-2 pi b s};
    // left:  e^{+2 pi b (x+s)} -> weight e^{+2 pi b s}
    acc(ig.num, 1.0);
    acc(ig.den, -1.0);
    SideAsym a;
    a.c2 = ig.c2 - sgn * iu * pi / 2.0 * N;
    a.c1 = ig.c1 - sgn * iu * pi * S1;
    a.c0 = ig.c0 - sgn * (iu * pi / 2.0 * S2 + iu * pi * K * N);
    const cplx alpha = iu / (2.0 * std::sin(pi * b * b));
    const cplx beta = iu / (2.0 * std::sin(pi / (b * b)));
    a.a_b = sgn * alpha * Eb;
    a.a_binv = sgn * beta * Ei;
    return a;
}

struct SchemeValue {
    cplx value{0.0, 0.0};
    double err_est = 0.0;
    std::vector<std::string> warnings;
};

namespace detail {

// ln s_b(z) minus the leading tail exponent of the given side, computed
// without large cancellations; in the far region it is the tail-correction
// logarithm itself.
inline cplx ln_sb_rel(const BContext& ctx, cplx z, int side) {
    const double b = ctx.b;
    const double K = (b * b + 1.0 / (b * b)) / 24.0;
    const cplx lead = -iu * pi * z * z / 2.0 - iu * pi * K;
    const SbTailCoeffs tc = sb_tail_coeffs(ctx);
    if (tc.usable && side > 0 && z.real() > tc.threshold)
        return sb_tail_log_corr(ctx, tc, z);
    if (tc.usable && side < 0 && z.real() < -tc.threshold)
        return -sb_tail_log_corr(ctx, tc, -z);
    return (side > 0) ? ln_sb(ctx, z) - lead : ln_sb(ctx, z) + lead;
}

struct SidePlan {
    bool ct = false;             // counterterm subtraction on this side
    bool sub_b = false;          // subtract the e^{-+2 pi b x} correction
    bool sub_binv = false;       // subtract the e^{-+2 pi x / b} correction
    double floor = -1e300;       // tail-height bound from a quadratic side
    double cap = 1e300;
};

// Plain-decay rate threshold: below it the quadrature reach becomes
// uneconomical and the slow exponential is integrated in closed form instead.
constexpr double kRateMin = 0.5;
constexpr double kRemainderMin = 0.25;

inline SidePlan plan_side(const BContext& ctx, const SideAsym& a, int side,
                          bool& needs_recurrence) {
    SidePlan plan;
    const double Q = ctx.Q();
    const double delta = Q / 8.0;
    if (std::fabs(a.c2.real()) > 1e-9)
        throw numerical_error("plan_side: unexpected real quadratic exponent");
    const double g = a.c2.imag();
    const double r = a.c1.real();
    if (std::fabs(g) > 1e-12) {
        // quadratic side: |I| ~ e^{t (r - 2 g h)} as t -> side*inf
        if (side > 0) {
            if (g > 0) plan.floor = r / (2.0 * g) + delta;
            else plan.cap = r / (2.0 * g) - delta;
        } else {
            // decay as t -> -inf needs r - 2 g h > 0
            if (g > 0) plan.cap = r / (2.0 * g) - delta;
            else plan.floor = r / (2.0 * g) + delta;
        }
        return plan;
    }
    // linear side: decay rate independent of the height
    const double rate0 = (side > 0) ? -r : r;
    if (rate0 >= kRateMin) return plan; // plain decay
    plan.ct = true;
    const double rb = rate0 + 2.0 * pi * ctx.b;
    const double ri = rate0 + 2.0 * pi / ctx.b;
    plan.sub_b = rb < kRateMin;
    plan.sub_binv = ri < kRateMin;
    const double second =
        rate0 + 2.0 * pi * std::min({2.0 * ctx.b, ctx.b + 1.0 / ctx.b,
                                     2.0 / ctx.b});
    double remainder = second;
    if (!plan.sub_b) remainder = std::min(remainder, rb);
    if (!plan.sub_binv) remainder = std::min(remainder, ri);
    if (remainder < kRemainderMin) needs_recurrence = true;
    if (plan.sub_b || plan.sub_binv) {
        if (std::fabs(std::sin(pi * ctx.b * ctx.b)) < 1e-6 ||
            std::fabs(std::sin(pi / (ctx.b * ctx.b))) < 1e-6)
            throw domain_error(
                "counterterm coefficients degenerate: b^2 too close to an "
                "integer");
    }
    return plan;
}

} // namespace detail

inline std::vector<std::string> validate_params(const BContext& ctx, Member m,
                                                const SchemeParams& p,
                                                bool poly_limit = false) {
    std::vector<std::string> warnings;
    if (!(ctx.b > 0.0)) throw domain_error("validate_params: b > 0 required");
    if (static_cast<int>(p.thetas.size()) != member_theta_count(m))
        throw domain_error("validate_params: wrong theta count");
    for (std::size_t k = 0; k < p.thetas.size(); ++k)
        if (std::fabs(p.thetas[k].imag()) > 1e-12)
            throw domain_error("validate_params: theta parameters must be "
                               "real (" +
                               member_theta_names(m)[k] + ")");
    if (!poly_limit) return warnings;

    auto need = [&](bool ok, const std::string& cond) {
        if (!ok) throw domain_error("validate_params: violated: " + cond);
    };
    const double tol = 1e-9;
    need(ctx.root_of_unity_distance() > 1e-3,
         "b^2 irrational (q too close to a root of unity)");
    switch (m) {
        case Member::R: {
            const cplx t1 = p.thetas[0], tt = p.thetas[1], ti = p.thetas[2],
                       t0 = p.thetas[3];
            need(std::abs(ti) > tol, "thetainf != 0");
            need(std::abs(tt) > tol, "thetat != 0");
            need(std::fabs(p.v1.real()) > tol, "Re sigma_s != 0");
            need(std::fabs(p.v2.real()) > tol, "Re sigma_t != 0");
            for (double e1 : {1.0, -1.0})
                for (double e2 : {1.0, -1.0}) {
                    need(std::fabs((t0 - t1 + e1 * p.v1 + e2 * p.v2).real()) >
                             tol,
                         "Re(theta0 - theta1 +- sigma_s +- sigma_t) != 0");
                    need(std::abs(t0 + t1 + e1 * ti + e2 * tt) > tol,
                         "theta0 + theta1 +- thetainf +- thetat != 0");
                }
            break;
        }
        case Member::H: {
            const cplx t0 = p.thetas[0], tt = p.thetas[1], ts = p.thetas[2];
            need(std::abs(tt) > tol, "thetat != 0");
            need(std::fabs(p.v1.real()) > tol, "Re sigma_s != 0");
            for (double e : {1.0, -1.0}) {
                need(std::fabs((ts / 2.0 - p.v2 - t0 + e * p.v1).real()) > tol,
                     "Re(thetastar/2 - nu - theta0 +- sigma_s) != 0");
                need(std::abs(t0 + ts + e * tt) > tol,
                     "theta0 + thetastar +- thetat != 0");
            }
            break;
        }
        case Member::S: {
            const cplx t0 = p.thetas[0], tt = p.thetas[1];
            need(std::abs(tt) > tol, "thetat != 0");
            need(std::fabs(p.v1.real()) > tol, "Re sigma_s != 0");
            for (double e : {1.0, -1.0})
                need(std::fabs((e * p.v1 + p.v2 + t0).real()) > tol,
                     "Re(+- sigma_s + rho + theta0) != 0");
            break;
        }
        case Member::X: {
            const cplx th = p.thetas[0];
            need(std::fabs(p.v1.real()) > tol, "Re sigma_s != 0");
            for (double e : {1.0, -1.0})
                need(std::fabs((p.v2 + th / 2.0 + e * p.v1).real()) > tol,
                     "Re(omega + theta/2 +- sigma_s) != 0");
            break;
        }
        case Member::Q:
            break;
        case Member::L: {
            const cplx tt = p.thetas[0], th = p.thetas[1];
            need(std::abs(tt) > tol, "thetat != 0");
            need(std::abs(th + tt) > tol && std::abs(th - tt) > tol,
                 "theta +- thetat != 0");
            need(std::fabs((th / 4.0 - p.v1 + p.v2).real()) > tol,
                 "Re(theta/4 - lambda + mu) != 0");
            break;
        }
        case Member::W:
            need(std::abs(p.thetas[0]) > tol, "thetat != 0");
            break;
        case Member::M:
            break;
    }
    return warnings;
}

namespace detail {

inline SchemeValue scheme_evaluate_impl(const BContext& ctx, Member m,
                                        const SchemeParams& p,
                                        const QuadratureConfig& cfg,
                                        int depth);

// eta-direction three-term recurrence of the Gaussian-kernel member, used
// when the counterterm reach in Im eta is exhausted:
//   F(eta) = 2 cosh(2 pi b sigma_s) F(eta - ib)
//            - (1 + e^{2 pi b (eta - 3ib/2)}) F(eta - 2ib).
inline SchemeValue q_recurrence(const BContext& ctx, const SchemeParams& p,
                                const QuadratureConfig& cfg, int depth) {
    if (depth > 16)
        throw domain_error("scheme_evaluate: extension recursion exceeded "
                           "max_shift = 16");
    SchemeParams p1 = p, p2 = p;
    p1.v2 = p.v2 - iu * ctx.b;
    p2.v2 = p.v2 - 2.0 * iu * ctx.b;
    SchemeValue f1 = scheme_evaluate_impl(ctx, Member::Q, p1, cfg, depth + 1);
    SchemeValue f2 = scheme_evaluate_impl(ctx, Member::Q, p2, cfg, depth + 1);
    const cplx c1 = 2.0 * std::cosh(2.0 * pi * ctx.b * p.v1);
    const cplx c2 =
        1.0 + std::exp(2.0 * pi * ctx.b * (p.v2 - 1.5 * iu * ctx.b));
    SchemeValue out;
    out.value = c1 * f1.value - c2 * f2.value;
    out.err_est = std::abs(c1) * f1.err_est + std::abs(c2) * f2.err_est;
    out.warnings = f1.warnings;
    out.warnings.insert(out.warnings.end(), f2.warnings.begin(),
                        f2.warnings.end());
    return out;
}

inline SchemeValue scheme_evaluate_impl(const BContext& ctx, Member m,
                                        const SchemeParams& p,
                                        const QuadratureConfig& cfg,
                                        int depth) {
    const double Q = ctx.Q();
    const MemberSpec spec = build_member(ctx, m, p);

    // prefactor (may legitimately vanish; poles are rejected)
    cplx lnP = spec.pref_phase;
    bool pref_zero = false;
    for (cplx a : spec.pref_sb) {
        auto cl = sb_classify(ctx, a);
        if (cl.kind == PointClassification::pole)
            throw domain_error("scheme_evaluate: prefactor pole at s_b(" +
                               format_complex(a) + ")");
        if (cl.kind == PointClassification::zero) pref_zero = true;
        if (!pref_zero) lnP += ln_sb(ctx, a);
    }

    // pole rays of the integrand
    std::vector<PoleLattice> up, down;
    for (cplx s : spec.ig.num) down.push_back({-s - iu * Q / 2.0, -1});
    for (cplx s : spec.ig.den) up.push_back({-s + iu * Q / 2.0, +1});

    const SideAsym aR = side_asym(ctx, spec.ig, +1);
    const SideAsym aL = side_asym(ctx, spec.ig, -1);
    bool needs_recurrence = false;
    SidePlan planR = plan_side(ctx, aR, +1, needs_recurrence);
    SidePlan planL = plan_side(ctx, aL, -1, needs_recurrence);

    // Counterterm differences are formed by cancellation of O(1) logarithms
    // until all factor arguments reach the tail expansion, so they carry an
    // absolute noise ~1e-15 amplified by the growing exponential e^{c1 x}
    // over that handoff region. Estimate the amplified floor per side; when
    // it swamps the achievable accuracy, the direct route is hopeless.
    double ct_noise[2] = {0.0, 0.0}; // [0] left, [1] right
    {
        const SbTailCoeffs tc = sb_tail_coeffs(ctx);
        double smax = 0.0;
        for (cplx s : spec.ig.num) smax = std::max(smax, std::fabs(s.real()));
        for (cplx s : spec.ig.den) smax = std::max(smax, std::fabs(s.real()));
        const double bmax = std::max(ctx.b, 1.0 / ctx.b);
        const double reach =
            (tc.usable ? tc.threshold : std::max(8.0, 5.0 * bmax)) + smax;
        for (int side : {-1, +1}) {
            const SidePlan& plan = (side > 0) ? planR : planL;
            const SideAsym& a = (side > 0) ? aR : aL;
            if (!plan.ct) continue;
            const double amp =
                std::max(0.0, static_cast<double>(side) * a.c1.real()) * reach;
            if (1e-15 * std::exp(amp) > 1e-8) needs_recurrence = true;
            ct_noise[(side + 1) / 2] = 1e-15 * std::exp(a.c0.real() + amp);
        }
    }
    if (needs_recurrence) {
        if (m == Member::Q) return q_recurrence(ctx, p, cfg, depth);
        throw domain_error("scheme_evaluate: variables outside numerical "
                           "extension reach for member " + member_name(m));
    }

    // Oscillation hints for the panel pre-splitter. Each s_b factor brings a
    // local quadratic phase ~ pi (x + Re s)^2 / 2 in its tail; those phases
    // need not cancel pointwise even when they cancel asymptotically, so the
    // bound uses the factor count (quadratic part) plus the shift offsets and
    // the explicit linear coefficient (x-independent part).
    const double n_factors =
        static_cast<double>(spec.ig.num.size() + spec.ig.den.size());
    double shift_sum = 0.0;
    for (cplx s : spec.ig.num) shift_sum += std::fabs(s.real());
    for (cplx s : spec.ig.den) shift_sum += std::fabs(s.real());
    const double phase_hint =
        std::max({std::fabs(aR.c2.imag()), std::fabs(aL.c2.imag()),
                  0.5 * pi * n_factors}) /
        pi;
    const double lin_freq = std::abs(spec.ig.c1.imag()) + pi * shift_sum;

    // The integrand is exp of a log-scale sum; a log magnitude of L carries
    // relative rounding noise ~1e-15 L in the exponential. Bound L over the
    // window actually integrated so the quadrature stops refining at the
    // attainable floor instead of chasing noise to max depth.
    double rel_noise_est;
    {
        const SbTailCoeffs tc = sb_tail_coeffs(ctx);
        const double bmax = std::max(ctx.b, 1.0 / ctx.b);
        const double thr =
            tc.usable ? tc.threshold : std::max(8.0, 5.0 * bmax);
        double smax = 0.0, lsum = 0.0;
        for (cplx s : spec.ig.num) smax = std::max(smax, std::fabs(s.real()));
        for (cplx s : spec.ig.den) smax = std::max(smax, std::fabs(s.real()));
        const double W = smax + thr + 10.0;
        for (cplx s : spec.ig.num)
            lsum += 0.5 * pi * (W + std::fabs(s.real())) *
                    (W + std::fabs(s.real()));
        for (cplx s : spec.ig.den)
            lsum += 0.5 * pi * (W + std::fabs(s.real())) *
                    (W + std::fabs(s.real()));
        const double Lmax = std::abs(spec.ig.c2) * W * W +
                            std::abs(spec.ig.c1) * W + lsum;
        rel_noise_est = 1e-15 * (2.0 + Lmax);
    }

    auto lnI = [&](cplx x) {
        cplx v = spec.ig.c0 + spec.ig.c1 * x + spec.ig.c2 * x * x;
        for (cplx s : spec.ig.num) v += ln_sb(ctx, x + s);
        for (cplx s : spec.ig.den) v -= ln_sb(ctx, x + s);
        return v;
    };
    auto I = [&](cplx x) { return std::exp(lnI(x)); };

    SchemeValue out;
    if (!planR.ct && !planL.ct) {
        TailRule tail;
        tail.preferred = -Q / 4.0;
        tail.left_cap = planL.cap;
        tail.left_floor = planL.floor;
        tail.right_cap = planR.cap;
        tail.right_floor = planR.floor;
        ContourSpec contour = auto_contour(up, down, tail, ctx, cfg);
        contour.phase_quad = phase_hint;
        contour.linear_freq = lin_freq;
        contour.rel_noise = rel_noise_est;
        ContourIntegral integ = integrate_contour(I, contour, cfg);
        if (pref_zero) {
            out.value = cplx(0.0, 0.0);
            out.err_est = 0.0;
        } else {
            out.value = std::exp(lnP) * integ.value;
            out.err_est = std::abs(std::exp(lnP)) * integ.err_est;
        }
        out.warnings = integ.warnings;
        return out;
    }

    // Counterterm route: flat contour at height h through p0 = i h, split at
    // Re x = 0. Closed forms integrate the subtracted exponentials exactly.
    const double margin = std::max(cfg.sep_margin_scale * Q, 1e-3 * Q);
    double lo = -1e300, hi = 1e300;
    for (const auto& r : down) lo = std::max(lo, r.base.imag());
    for (const auto& r : up) hi = std::min(hi, r.base.imag());
    double lo_eff = std::max({lo + margin, planL.floor, planR.floor});
    double hi_eff = std::min({hi - margin, planL.cap, planR.cap});
    if (lo_eff > hi_eff)
        throw pinch_error(
            "scheme_evaluate: no flat contour admissible for the counterterm "
            "route",
            cplx(0.0, 0.5 * (lo_eff + hi_eff)));
    // back away from both ends when room allows (caps/floors only improve
    // their decay margins further inside the band)
    const double want = std::min(0.1 * Q, 0.5 * (hi_eff - lo_eff));
    const double h =
        std::min(std::max(-Q / 4.0, lo_eff + want), hi_eff - want);
    const cplx p0(0.0, h);

    ContourIntegral total;
    for (int side : {-1, +1}) {
        const SidePlan& plan = (side > 0) ? planR : planL;
        const SideAsym& a = (side > 0) ? aR : aL;
        if (!plan.ct) {
            ContourIntegral r =
                integrate_ray(I, p0, side, phase_hint, cfg, 0.0, lin_freq,
                              rel_noise_est);
            total.value += r.value;
            total.err_est += r.err_est;
            total.warnings.insert(total.warnings.end(), r.warnings.begin(),
                                  r.warnings.end());
            continue;
        }
        const double w = 2.0 * pi * (side > 0 ? 1.0 : -1.0);
        auto g = [&](cplx x) {
            // ln I(x) - (a.c0 + a.c1 x + a.c2 x^2) == sum of the relative
            // logarithms: each ln_sb_rel already removes its factor's leading
            // quadric, and those leads are exactly what side_asym folded into
            // the asymptotic polynomial.
            cplx res(0.0, 0.0);
            for (cplx s : spec.ig.num) res += ln_sb_rel(ctx, x + s, side);
            for (cplx s : spec.ig.den) res -= ln_sb_rel(ctx, x + s, side);
            cplx d = cexpm1(res);
            if (plan.sub_b) d -= a.a_b * std::exp(-w * ctx.b * x);
            if (plan.sub_binv) d -= a.a_binv * std::exp(-w * x / ctx.b);
            return std::exp(a.c0 + a.c1 * x) * d;
        };
        ContourIntegral r =
            integrate_ray(g, p0, side, phase_hint, cfg,
                          ct_noise[(side + 1) / 2], lin_freq, rel_noise_est);
        total.value += r.value;
        total.err_est += r.err_est;
        total.warnings.insert(total.warnings.end(), r.warnings.begin(),
                              r.warnings.end());
        // closed forms: int_{p0}^{side inf} e^{c0 + L x} dx = -side e^{c0 +
        // L p0} / L, by analytic continuation in L
        auto closed = [&](cplx coeff, cplx L) {
            if (std::abs(L) < 1e-10)
                throw domain_error(
                    "scheme_evaluate: marginal tail exponent (|L| ~ 0)");
            total.value -= static_cast<double>(side) * coeff *
                           std::exp(a.c0 + L * p0) / L;
        };
        closed(cplx(1.0, 0.0), a.c1);
        if (plan.sub_b) closed(a.a_b, a.c1 - w * ctx.b);
        if (plan.sub_binv) closed(a.a_binv, a.c1 - w / ctx.b);
    }
    if (pref_zero) {
        out.value = cplx(0.0, 0.0);
        out.err_est = 0.0;
    } else {
        out.value = std::exp(lnP) * total.value;
        out.err_est = std::abs(std::exp(lnP)) * total.err_est;
    }
    out.warnings = total.warnings;
    return out;
}

} // namespace detail

inline SchemeValue scheme_evaluate(const BContext& ctx, Member m,
                                   const SchemeParams& p,
                                   const QuadratureConfig& cfg = {}) {
    validate_params(ctx, m, p, false);
    return detail::scheme_evaluate_impl(ctx, m, p, cfg, 0);
}

// ---------------------------------------------------------------------------
// Discretization lattices and polynomial limits
// ---------------------------------------------------------------------------

struct DiscretizationLattice {
    Member member;
    int var = 1; // 1 = first variable, 2 = second
    cplx base{0.0, 0.0};
    QPolyFamily family;
};

inline DiscretizationLattice make_lattice(const BContext& ctx, Member m,
                                          const SchemeParams& p, int var) {
    const cplx iQ2 = iu * ctx.Q() / 2.0;
    DiscretizationLattice lat;
    lat.member = m;
    lat.var = var;
    switch (m) {
        case Member::R:
            lat.family = QPolyFamily::AskeyWilson;
            lat.base = (var == 1) ? p.thetas[3] + p.thetas[1] + iQ2
                                  : p.thetas[0] + p.thetas[1] + iQ2;
            return lat;
        case Member::H:
            if (var == 2) {
                lat.family = QPolyFamily::ContinuousDualQHahn;
                lat.base = p.thetas[2] / 2.0 + p.thetas[1] + iQ2;
            } else {
                lat.family = QPolyFamily::BigQJacobi;
                lat.base = p.thetas[0] + p.thetas[1] + iQ2;
            }
            return lat;
        case Member::S:
            if (var == 2) {
                lat.family = QPolyFamily::AlSalamChihara;
                lat.base = p.thetas[1] + iQ2;
            } else {
                lat.family = QPolyFamily::LittleQJacobi_Y;
                lat.base = p.thetas[0] + p.thetas[1] + iQ2;
            }
            return lat;
        case Member::X:
            if (var != 2) break;
            lat.family = QPolyFamily::ContBigQHermite;
            lat.base = p.thetas[0] / 2.0 + iQ2;
            return lat;
        case Member::Q:
            if (var != 2) break;
            lat.family = QPolyFamily::ContQHermite;
            lat.base = iQ2;
            return lat;
        case Member::L:
            if (var != 1) break;
            lat.family = QPolyFamily::BigQLaguerre;
            lat.base = p.thetas[1] / 2.0 + p.thetas[0] + iQ2;
            return lat;
        case Member::W:
            if (var != 1) break;
            lat.family = QPolyFamily::LittleQLaguerre;
            lat.base = p.thetas[0] + iQ2;
            return lat;
        case Member::M:
            if (var != 1) break;
            lat.family = QPolyFamily::LittleQLaguerre;
            lat.base = iQ2;
            return lat;
    }
    throw domain_error("make_lattice: member " + member_name(m) +
                       " has no lattice in variable " + std::to_string(var));
}

struct PolyMap {
    QPolyFamily family;
    std::vector<cplx> params;
    cplx q;
    cplx arg;
};

inline PolyMap poly_param_map(const BContext& ctx, Member m,
                              const SchemeParams& p, int var) {
    const DiscretizationLattice lat = make_lattice(ctx, m, p, var);
    const double b = ctx.b;
    const cplx iQ2 = iu * ctx.Q() / 2.0;
    auto E = [&](cplx z) { return std::exp(2.0 * pi * b * z); };
    PolyMap out;
    out.family = lat.family;
    out.q = ctx.q();
    switch (m) {
        case Member::R: {
            const cplx t1 = p.thetas[0], tt = p.thetas[1], ti = p.thetas[2],
                       t0 = p.thetas[3];
            if (var == 1) {
                out.params = {E(iQ2 + t1 + tt), E(iQ2 + t0 - ti),
                              E(iQ2 - t1 + tt), E(iQ2 + t0 + ti)};
                out.arg = E(p.v2);
            } else {
                out.params = {E(iQ2 + t0 + tt), E(iQ2 + t1 - ti),
                              E(iQ2 - t0 + tt), E(iQ2 + t1 + ti)};
                out.arg = E(p.v1);
            }
            break;
        }
        case Member::H: {
            const cplx t0 = p.thetas[0], tt = p.thetas[1], ts = p.thetas[2];
            if (var == 2) {
                out.params = {E(tt + t0 + iQ2), E(tt - t0 + iQ2),
                              E(ts + iQ2)};
                out.arg = E(p.v1);
            } else {
                out.params = {E(2.0 * tt), E(2.0 * t0), E(t0 + ts + tt)};
                out.arg = E(tt + ts / 2.0 + iQ2) * E(-p.v2);
            }
            break;
        }
        case Member::S: {
            const cplx t0 = p.thetas[0], tt = p.thetas[1];
            if (var == 2) {
                out.params = {E(tt + t0 + iQ2), E(tt - t0 + iQ2)};
                out.arg = E(p.v1);
            } else {
                out.params = {E(2.0 * tt), E(2.0 * t0)};
                out.arg = E(tt + iQ2) * E(-p.v2);
            }
            break;
        }
        case Member::X:
            out.params = {E(p.thetas[0] + iQ2)};
            out.arg = E(p.v1);
            break;
        case Member::Q:
            out.params = {};
            out.arg = E(p.v1);
            break;
        case Member::L: {
            const cplx tt = p.thetas[0], th = p.thetas[1];
            out.params = {E(2.0 * tt), E(th + tt)};
            out.arg = E(th / 4.0 + tt + iQ2) * E(-p.v2);
            break;
        }
        case Member::W:
            out.params = {E(2.0 * p.thetas[0])};
            out.arg = E(-(iQ2 + p.v2));
            break;
        case Member::M:
            out.params = {cplx(0.0, 0.0)};
            out.arg = E(-(iQ2 + p.v2));
            break;
    }
    return out;
}

// Evaluate the member exactly at lattice point n via the residue-deformation
// sum. The colliding numerator shift and the vanishing prefactor argument are
// detected numerically; only the (m, l = 0) residues survive against the
// prefactor zero, each through the entire ratio sb_shift_ratio.
inline cplx scheme_evaluate_at_lattice(const BContext& ctx, Member m,
                                       SchemeParams p,
                                       const DiscretizationLattice& lat, int n,
                                       const QuadratureConfig& cfg = {}) {
    if (n < 0) throw domain_error("lattice index must be >= 0");
    const cplx iQ2 = iu * ctx.Q() / 2.0;
    const cplx vn = lat.base + iu * ctx.b * static_cast<double>(n);
    if (lat.var == 1) p.v1 = vn;
    else p.v2 = vn;

    if (m == Member::Q) {
        // no pole collision here: the mechanism is loss of tail decay, so
        // evaluate just below the lattice point and Richardson-extrapolate
        const double eps0 = 1e-2 * ctx.Q();
        const int levels = 4;
        std::vector<double> eps(levels);
        std::vector<cplx> val(levels);
        for (int k = 0; k < levels; ++k) {
            eps[k] = eps0 / std::pow(2.0, k);
            SchemeParams pk = p;
            pk.v2 = vn - iu * eps[k];
            val[k] = detail::scheme_evaluate_impl(ctx, m, pk, cfg, 0).value;
        }
        // Neville extrapolation to eps = 0
        for (int j = 1; j < levels; ++j)
            for (int k = levels - 1; k >= j; --k)
                val[k] = val[k] +
                         (val[k] - val[k - 1]) * eps[k] / (eps[k - j] - eps[k]);
        if (std::abs(val[levels - 1] - val[levels - 2]) >
            1e-4 * std::max(1.0, std::abs(val[levels - 1])))
            throw numerical_error(
                "lattice extrapolation did not converge for member Q");
        return val[levels - 1];
    }

    const MemberSpec spec = build_member(ctx, m, p);
    const double tol = 1e-8 * std::max(1.0, std::abs(vn));

    int j = -1; // colliding numerator factor: num[j] = -iQ/2 - ibn
    for (std::size_t k = 0; k < spec.ig.num.size(); ++k)
        if (std::abs(spec.ig.num[k] + iQ2 + iu * ctx.b * static_cast<double>(n)) <
            tol) {
            j = static_cast<int>(k);
            break;
        }
    int kz = -1; // vanishing prefactor argument: pref_sb[kz] = iQ/2 + ibn
    for (std::size_t k = 0; k < spec.pref_sb.size(); ++k)
        if (std::abs(spec.pref_sb[k] - iQ2 - iu * ctx.b * static_cast<double>(n)) <
            tol) {
            kz = static_cast<int>(k);
            break;
        }
    if (j < 0 || kz < 0)
        throw domain_error(
            "scheme_evaluate_at_lattice: lattice structure not found (check "
            "parameters and lattice variable)");

    // prefactor without its vanishing factor
    cplx lnPrest = spec.pref_phase;
    for (std::size_t k = 0; k < spec.pref_sb.size(); ++k) {
        if (static_cast<int>(k) == kz) continue;
        auto cl = sb_classify(ctx, spec.pref_sb[k]);
        if (cl.kind != PointClassification::regular)
            throw domain_error(
                "scheme_evaluate_at_lattice: prefactor argument on the "
                "zero/pole lattice of s_b");
        lnPrest += ln_sb(ctx, spec.pref_sb[k]);
    }
    const cplx Prest = std::exp(lnPrest);

    auto I_rest = [&](cplx x) {
        cplx v = spec.ig.c0 + spec.ig.c1 * x + spec.ig.c2 * x * x;
        for (std::size_t k = 0; k < spec.ig.num.size(); ++k)
            if (static_cast<int>(k) != j) v += ln_sb(ctx, x + spec.ig.num[k]);
        for (cplx s : spec.ig.den)
            if (std::abs(s - iQ2) > 1e-14) v -= ln_sb(ctx, x + s);
        return std::exp(v);
    };

    cplx sum(0.0, 0.0);
    for (int mm = 0; mm <= n; ++mm) {
        const cplx xm = iu * ctx.b * static_cast<double>(n - mm);
        const cplx ratio =
            sb_shift_ratio(ctx, iQ2 + iu * ctx.b * static_cast<double>(n - mm),
                           mm);
        sum += (-2.0 * pi * iu) * sb_residue(ctx, mm, 0) * Prest * I_rest(xm) *
               ratio;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Confluent embeddings between adjacent members
// ---------------------------------------------------------------------------

enum class ConfluenceEdge { RtoH, HtoS, StoX, XtoQ, HtoL, LtoW, WtoM };

inline std::string edge_name(ConfluenceEdge e) {
    switch (e) {
        case ConfluenceEdge::RtoH: return "RtoH";
        case ConfluenceEdge::HtoS: return "HtoS";
        case ConfluenceEdge::StoX: return "StoX";
        case ConfluenceEdge::XtoQ: return "XtoQ";
        case ConfluenceEdge::HtoL: return "HtoL";
        case ConfluenceEdge::LtoW: return "LtoW";
        case ConfluenceEdge::WtoM: return "WtoM";
    }
    return "?";
}

inline ConfluenceEdge edge_from_name(const std::string& s) {
    for (ConfluenceEdge e :
         {ConfluenceEdge::RtoH, ConfluenceEdge::HtoS, ConfluenceEdge::StoX,
          ConfluenceEdge::XtoQ, ConfluenceEdge::HtoL, ConfluenceEdge::LtoW,
          ConfluenceEdge::WtoM})
        if (edge_name(e) == s) return e;
    throw domain_error("unknown confluence edge: " + s);
}

// sign of Lambda -> +-infinity for each edge
inline int edge_lambda_sign(ConfluenceEdge e) {
    switch (e) {
        case ConfluenceEdge::RtoH: return -1;
        case ConfluenceEdge::HtoS: return -1;
        case ConfluenceEdge::StoX: return +1;
        case ConfluenceEdge::XtoQ: return -1;
        case ConfluenceEdge::HtoL: return -1;
        case ConfluenceEdge::LtoW: return +1;
        case ConfluenceEdge::WtoM: return -1;
    }
    return -1;
}

inline Member edge_parent(ConfluenceEdge e) {
    switch (e) {
        case ConfluenceEdge::RtoH: return Member::R;
        case ConfluenceEdge::HtoS: return Member::H;
        case ConfluenceEdge::StoX: return Member::S;
        case ConfluenceEdge::XtoQ: return Member::X;
        case ConfluenceEdge::HtoL: return Member::H;
        case ConfluenceEdge::LtoW: return Member::L;
        case ConfluenceEdge::WtoM: return Member::W;
    }
    return Member::R;
}

inline Member edge_child(ConfluenceEdge e) {
    switch (e) {
        case ConfluenceEdge::RtoH: return Member::H;
        case ConfluenceEdge::HtoS: return Member::S;
        case ConfluenceEdge::StoX: return Member::X;
        case ConfluenceEdge::XtoQ: return Member::Q;
        case ConfluenceEdge::HtoL: return Member::L;
        case ConfluenceEdge::LtoW: return Member::W;
        case ConfluenceEdge::WtoM: return Member::M;
    }
    return Member::H;
}

struct Confluence {
    Member parent;
    SchemeParams parent_params;
    cplx normalizer{1.0, 0.0};
};

// Child descriptor + finite Lambda -> parent descriptor whose value times the
// normalizer approaches the child value as Lambda -> +-infinity.
inline Confluence confluence_embed(const BContext& ctx, ConfluenceEdge e,
                                   const SchemeParams& child, double Lambda) {
    Confluence out;
    out.parent = edge_parent(e);
    SchemeParams& q = out.parent_params;
    const cplx L(Lambda, 0.0);
    switch (e) {
        case ConfluenceEdge::RtoH: {
            // child H(theta0, thetat, thetastar; sigma_s, nu)
            const cplx t0 = child.thetas[0], tt = child.thetas[1],
                       ts = child.thetas[2];
            q.thetas = {(L + ts) / 2.0, tt, (L - ts) / 2.0, t0};
            q.v1 = child.v1;
            q.v2 = L / 2.0 + child.v2;
            break;
        }
        case ConfluenceEdge::HtoS: {
            // child S(theta0, thetat; sigma_s, rho)
            q.thetas = {child.thetas[0], child.thetas[1], L};
            q.v1 = child.v1;
            q.v2 = L / 2.0 + child.v2;
            break;
        }
        case ConfluenceEdge::StoX: {
            // child X(theta; sigma_s, omega)
            const cplx th = child.thetas[0];
            q.thetas = {(th + L) / 2.0, (th - L) / 2.0};
            q.v1 = child.v1;
            q.v2 = -L / 2.0 + child.v2;
            break;
        }
        case ConfluenceEdge::XtoQ: {
            // child Q(; sigma_s, eta)
            q.thetas = {L};
            q.v1 = child.v1;
            q.v2 = L / 2.0 + child.v2;
            out.normalizer = std::exp(
                2.0 * iu * pi * (child.v2 - iu * ctx.Q() / 2.0) *
                (L + iu * ctx.Q() / 2.0));
            break;
        }
        case ConfluenceEdge::HtoL: {
            // child L(thetat, theta; lambda, mu)
            const cplx tt = child.thetas[0], th = child.thetas[1];
            q.thetas = {(th + L) / 2.0, tt, (th - L) / 2.0};
            q.v1 = child.v1 + L / 2.0;
            q.v2 = child.v2 - L / 4.0;
            break;
        }
        case ConfluenceEdge::LtoW: {
            // child W(thetat; kappa, omega)
            q.thetas = {child.thetas[0], L};
            q.v1 = L / 2.0 + child.v1;
            q.v2 = -3.0 * L / 4.0 + child.v2;
            break;
        }
        case ConfluenceEdge::WtoM: {
            // child M(; zeta, omega)
            q.thetas = {L};
            q.v1 = L + child.v1;
            q.v2 = child.v2;
            break;
        }
    }
    return out;
}

} // namespace hypgeo

#endif
