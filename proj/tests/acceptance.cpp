// End-to-end acceptance run: one pass/fail line per criterion, exit 0 only
// when every criterion passes.  Each criterion is self-contained and prints
// its worst residual and wall time so regressions are easy to localize.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hypgeo/verifier.hpp"

using namespace hypgeo;

namespace {

struct Outcome {
    bool passed = false;
    double worst = 0.0;   // worst residual observed (0 when not meaningful)
    std::string note;     // appended to the report line when non-empty
};

double g_total_s = 0.0;

bool report(const char* name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.passed = false;
        o.note = std::string("exception: ") + e.what();
    }
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    g_total_s += s;
    std::printf("%s  %-18s  worst=%.3e  %7.1fs%s%s\n",
                o.passed ? "PASS" : "FAIL", name, o.worst, s,
                o.note.empty() ? "" : "  ", o.note.c_str());
    std::fflush(stdout);
    return o.passed;
}

double maxd(double a, double b) { return a > b ? a : b; }

// -- 1. double sine identities ----------------------------------------------
Outcome crit_double_sine() {
    Outcome o;
    double worst_id = 0.0;   // budget 1e-8
    double worst_soft = 0.0; // residue / asymptotics, budget 1e-6
    for (double b : {0.7, 1.0, 1.31}) {
        BContext ctx(b), ctxinv(1.0 / b);
        std::mt19937 rng(911u + (unsigned)(100 * b));
        std::uniform_real_distribution<double> Ux(-2.0, 2.0), Uy(-0.4, 0.4);
        for (int k = 0; k < 100; ++k) {
            const cplx z(Ux(rng), Uy(rng));
            worst_id = maxd(worst_id, std::abs(sb(ctx, z) * sb(ctx, -z) - 1.0));
            const cplx r1 = sb(ctx, z + iu * b / 2.0) / sb(ctx, z - iu * b / 2.0);
            worst_id = maxd(worst_id, std::abs(r1 - 2.0 * std::cosh(pi * b * z)));
            const cplx r2 =
                sb(ctx, z + iu / (2.0 * b)) / sb(ctx, z - iu / (2.0 * b));
            worst_id = maxd(worst_id, std::abs(r2 - 2.0 * std::cosh(pi * z / b)));
            worst_id = maxd(worst_id, std::abs(sb(ctx, z) - sb(ctxinv, z)));
        }
        // residue of the first pole: (z + iQ/2) s_b(z) -> i/(2 pi)
        worst_soft =
            maxd(worst_soft, std::abs(sb_residue(ctx, 0, 0) - iu / (2.0 * pi)));
        const cplx p00(0.0, -ctx.Q() / 2.0);
        // two probe radii + Richardson step to cancel the O(probe) term
        const cplx probe = 1e-5 * std::exp(iu * pi / 3.0);
        const cplx e1 = probe * sb(ctx, p00 + probe);
        const cplx e2 = 2.0 * probe * sb(ctx, p00 + 2.0 * probe);
        worst_soft = maxd(worst_soft, std::abs(2.0 * e1 - e2 - iu / (2.0 * pi)));
        // leading asymptotics on both sides
        const double c24 = pi * (b * b + 1.0 / (b * b)) / 24.0;
        for (double x : {6.0, -6.0}) {
            const cplx z(x, 0.25);
            cplx lead = -iu * pi * z * z / 2.0 - iu * c24;
            if (x < 0) lead = -lead;
            worst_soft = maxd(worst_soft, std::abs(ln_sb(ctx, z) - lead));
        }
    }
    o.worst = maxd(worst_id, worst_soft);
    o.passed = worst_id < 1e-8 && worst_soft < 1e-6;
    return o;
}

// -- 2. q-series suite --------------------------------------------------------
Outcome crit_qseries() {
    Outcome o;
    const cplx qm(0.31, 0.41), x(0.8, 0.1);
    double worst_modes = 0.0; // budget 1e-9
    for (QPolyFamily fam :
         {QPolyFamily::AskeyWilson, QPolyFamily::ContinuousDualQHahn,
          QPolyFamily::AlSalamChihara, QPolyFamily::ContBigQHermite,
          QPolyFamily::ContQHermite, QPolyFamily::BigQJacobi,
          QPolyFamily::LittleQJacobi_Y, QPolyFamily::BigQLaguerre,
          QPolyFamily::LittleQLaguerre}) {
        std::vector<cplx> par;
        for (std::size_t i = 0; i < family_param_count(fam); ++i)
            par.push_back(cplx(0.2 + 0.1 * i, 0.05));
        for (int n = 0; n <= 5; ++n) {
            const cplx a = qpoly_eval(fam, n, par, qm, x, QPolyMode::series);
            const cplx b = qpoly_eval(fam, n, par, qm, x, QPolyMode::recurrence);
            worst_modes = maxd(worst_modes, detail::rel_resid(a, b));
        }
    }
    // finite-degree degeneration arrows between neighbouring families
    double worst_arrow = 0.0; // budget 1e-5
    auto rel = [](cplx a, cplx b) { return detail::rel_resid(a, b); };
    const cplx q_ref(0.36, 0.22), z(0.9, 0.4), xa(0.35, 0.15);
    std::vector<cplx> p4{{1.3, 0.2}, {0.4, -0.1}, {0.7, 0.3}, {0.0, 0.0}};
    for (int n : {1, 3, 5}) {
        worst_arrow = maxd(
            worst_arrow,
            rel(qpoly_eval(QPolyFamily::AskeyWilson, n, p4, q_ref, z),
                qpoly_eval(QPolyFamily::ContinuousDualQHahn, n,
                           {p4[0], p4[1], p4[2]}, q_ref, z)));
        worst_arrow = maxd(
            worst_arrow,
            rel(qpoly_eval(QPolyFamily::ContinuousDualQHahn, n,
                           {p4[0], p4[1], 0.0}, q_ref, z),
                qpoly_eval(QPolyFamily::AlSalamChihara, n, {p4[0], p4[1]},
                           q_ref, z)));
        worst_arrow = maxd(
            worst_arrow,
            rel(qpoly_eval(QPolyFamily::AlSalamChihara, n, {p4[0], 0.0}, q_ref,
                           z),
                qpoly_eval(QPolyFamily::ContBigQHermite, n, {p4[0]}, q_ref,
                           z)));
        const cplx alpha(1e-8, 0.0);
        cplx xalpha =
            qpoly_eval(QPolyFamily::ContBigQHermite, n, {alpha}, q_ref, z);
        for (int k = 0; k < n; ++k) xalpha /= alpha;
        worst_arrow = maxd(
            worst_arrow,
            rel(xalpha, qpoly_eval(QPolyFamily::ContQHermite, n, {}, q_ref, z)));
        const cplx gamma(1e8, 0.0);
        worst_arrow = maxd(
            worst_arrow,
            rel(qpoly_eval(QPolyFamily::BigQJacobi, n,
                           {{0.6, 0.1}, {0.4, -0.2}, gamma}, q_ref,
                           gamma * q_ref * xa),
                qpoly_eval(QPolyFamily::LittleQJacobi_p, n,
                           {{0.6, 0.1}, {0.4, -0.2}}, q_ref, xa)));
    }
    // the three duality formulas, all degrees through 5
    double worst_dual = 0.0; // budget 1e-10
    for (DualityKind kind :
         {DualityKind::askey_wilson, DualityKind::hahn_jacobi,
          DualityKind::chihara_littlejacobi}) {
        std::vector<cplx> par = {cplx(1.3, 0.2), cplx(0.4, -0.1),
                                 cplx(0.7, 0.3), cplx(0.2, 0.05)};
        par.resize(kind == DualityKind::askey_wilson ? 4
                   : kind == DualityKind::hahn_jacobi ? 3
                                                      : 2);
        for (int n = 0; n <= 5; ++n)
            for (int m = 0; m <= 5; ++m) {
                const DualityPair pr = qpoly_duality(kind, n, m, par, q_ref);
                worst_dual = maxd(worst_dual, detail::rel_resid(pr.lhs, pr.rhs));
            }
    }
    o.worst = maxd(worst_modes, maxd(worst_arrow, worst_dual));
    o.passed = worst_modes < 1e-9 && worst_arrow < 1e-5 && worst_dual < 1e-10;
    return o;
}

// -- 3. eigen equations -------------------------------------------------------
Outcome crit_eigen() {
    Outcome o;
    const BContext ctx(0.84);
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> U(0.1, 0.6);
    double worst = 0.0;
    int failed = 0, total = 0, redraws = 0;
    auto draw = [&](Member m) {
        SchemeParams p = detail::reference_params(m);
        for (auto& t : p.thetas) t = U(rng);
        p.v1 = U(rng);
        p.v2 = U(rng);
        return p;
    };
    for (auto [m, v] : eigen_equation_list()) {
        std::vector<SchemeParams> pts = {detail::reference_params(m)};
        for (int k = 0; k < 3; ++k) pts.push_back(draw(m));
        for (SchemeParams p : pts) {
            CheckReport r;
            // a rare draw can land where no admissible contour exists
            // (pole rays pinch); such points are outside the evaluator's
            // domain, so redraw deterministically from the same stream
            for (int attempt = 0;; ++attempt) {
                try {
                    r = check_eigen(ctx, m, v, p, 1e-6);
                    break;
                } catch (const domain_error&) {
                    if (attempt >= 5) throw;
                    p = draw(m);
                    ++redraws;
                } catch (const numerical_error&) {
                    if (attempt >= 5) throw;
                    p = draw(m);
                    ++redraws;
                }
            }
            worst = maxd(worst, r.residual);
            ++total;
            if (!r.passed) {
                ++failed;
                std::printf("      eigen failure: %s  resid=%.3e  %s\n",
                            r.check_id.c_str(), r.residual,
                            r.inputs.c_str());
            }
        }
    }
    // the remaining operator pair of the lowest member needs a sign choice
    // adjudicated numerically; report it separately, still gating.
    for (OpVariant v : {OpVariant::dual, OpVariant::dual_binv}) {
        const CheckReport r =
            check_eigen(ctx, Member::M, v, detail::reference_params(Member::M),
                        1e-6, MDualSign::minus);
        ++total;
        worst = maxd(worst, r.residual);
        if (!r.passed) ++failed;
    }
    o.worst = worst;
    o.passed = failed == 0;
    o.note = std::to_string(total - failed) + "/" + std::to_string(total) +
             " equations-at-points";
    if (redraws > 0)
        o.note += ", " + std::to_string(redraws) + " out-of-domain redraws";
    return o;
}

// -- 4. half-shift operator squares to the full one ---------------------------
Outcome crit_operator_square() {
    Outcome o;
    const BContext ctx(0.84);
    const CheckReport r = check_operator_square(
        ctx, detail::reference_params(Member::Q), 1e-10);
    o.worst = r.residual;
    o.passed = r.passed;
    return o;
}

// -- 5. polynomial limits on the discretization lattices ----------------------
Outcome crit_poly_limits() {
    Outcome o;
    const BContext ctx(0.84);
    double worst = 0.0;     // budget 1e-5 against the q-polynomial oracle
    double worst_n0 = 0.0;  // budget 1e-7 against 1
    double worst_q1 = 0.0;  // budget 1e-6 against 2 cosh(2 pi b sigma)
    for (auto [m, var] : lattice_row_list()) {
        const SchemeParams p = detail::reference_params(m);
        const DiscretizationLattice lat = make_lattice(ctx, m, p, var);
        const PolyMap map = poly_param_map(ctx, m, p, var);
        for (int n = 0; n <= 3; ++n) {
            const cplx got = scheme_evaluate_at_lattice(ctx, m, p, lat, n);
            const cplx want = qpoly_eval(map.family, n, map.params, map.q,
                                         map.arg);
            worst = maxd(worst, detail::rel_resid(got, want));
            if (n == 0) worst_n0 = maxd(worst_n0, std::abs(got - 1.0));
            if (n == 1 && m == Member::Q) {
                const cplx target = 2.0 * std::cosh(2.0 * pi * ctx.b * p.v1);
                worst_q1 = std::abs(got - target);
            }
        }
    }
    o.worst = maxd(worst, maxd(worst_n0, worst_q1));
    o.passed = worst < 1e-5 && worst_n0 < 1e-7 && worst_q1 < 1e-6;
    return o;
}

// -- 6. confluences down the scheme -------------------------------------------
Outcome crit_confluence() {
    Outcome o;
    const BContext ctx(0.84);
    double worst = 0.0;
    bool all = true;
    for (ConfluenceEdge e : confluence_edge_list()) {
        const CheckReport r = check_confluence(ctx, e, confluence_child_params(e),
                                               {8.0, 12.0, 16.0}, 1e-4);
        worst = maxd(worst, r.residual);
        if (!r.passed) {
            all = false;
            std::printf("      confluence failure: %s  resid=%.3e\n",
                        r.check_id.c_str(), r.residual);
        }
    }
    o.worst = worst;
    o.passed = all;
    return o;
}

// -- 7. symmetries -------------------------------------------------------------
Outcome crit_symmetries() {
    Outcome o;
    const BContext ctx(0.84);
    double worst = 0.0;
    bool all = true;
    auto take = [&](const CheckReport& r) {
        worst = maxd(worst, r.residual);
        all = all && r.passed;
    };
    for (Member m : {Member::R, Member::H, Member::S, Member::X, Member::Q,
                     Member::L, Member::W, Member::M})
        take(check_symmetry(ctx, m, SymmetryKind::b_inversion,
                            detail::reference_params(m), 1e-8));
    take(check_symmetry(ctx, Member::R, SymmetryKind::self_duality,
                        detail::reference_params(Member::R), 1e-8));
    take(check_symmetry(ctx, Member::R, SymmetryKind::evenness,
                        detail::reference_params(Member::R), 1e-8));
    o.worst = worst;
    o.passed = all;
    return o;
}

// -- 8. contour robustness -------------------------------------------------------
Outcome crit_contour() {
    Outcome o;
    const BContext ctx(0.84);
    double worst_quad = 0.0; // budget 1e-10
    {
        ContourSpec spec;
        spec.waypoints = {cplx(-7.0, 0.3), cplx(-1.0, -0.8), cplx(2.0, 0.5),
                          cplx(7.0, -0.2)};
        auto r = integrate_contour(
            [](cplx x) { return std::exp(-pi * x * x); }, spec);
        worst_quad = maxd(worst_quad, std::abs(r.value - 1.0));
    }
    {
        ContourSpec spec;
        spec.waypoints = {cplx(-8.0, 0.55), cplx(8.0, -0.55)};
        spec.phase_quad = 1.0;
        auto r = integrate_contour(
            [](cplx x) { return std::exp(-iu * pi * x * x); }, spec);
        worst_quad = maxd(worst_quad,
                          std::abs(r.value - std::exp(-iu * pi / 4.0)));
    }
    // second member of the scheme: value must not move under admissible
    // deformations of the integration contour
    const SchemeParams p = detail::reference_params(Member::H);
    const MemberSpec spec = build_member(ctx, Member::H, p);
    cplx lnP = spec.pref_phase;
    for (cplx a : spec.pref_sb) lnP += ln_sb(ctx, a);
    std::vector<PoleLattice> up, down;
    const double Q = ctx.Q();
    for (cplx s : spec.ig.num) down.push_back({-s - iu * Q / 2.0, -1});
    for (cplx s : spec.ig.den) up.push_back({-s + iu * Q / 2.0, +1});
    auto I = [&](cplx x) {
        cplx v = spec.ig.c0 + spec.ig.c1 * x + spec.ig.c2 * x * x;
        for (cplx s : spec.ig.num) v += ln_sb(ctx, x + s);
        for (cplx s : spec.ig.den) v -= ln_sb(ctx, x + s);
        return std::exp(lnP + v);
    };
    const SchemeValue ref = scheme_evaluate(ctx, Member::H, p);
    bool stable = true;
    for (int variant : {0, 1, 2}) {
        TailRule tail;
        tail.preferred = (variant == 0) ? -0.05 * Q
                         : (variant == 1) ? -0.35 * Q
                                          : -0.2 * Q;
        ContourSpec contour = auto_contour(up, down, tail, ctx);
        contour.phase_quad = 1.5;
        if (variant == 2)
            contour.waypoints.insert(contour.waypoints.begin() + 1,
                                     cplx(0.05, -0.1 * Q));
        const ContourIntegral integ = integrate_contour(I, contour);
        const double dev = std::abs(integ.value - ref.value);
        if (dev > std::max(1e-10, 10.0 * (integ.err_est + ref.err_est)))
            stable = false;
        o.worst = maxd(o.worst, dev);
    }
    o.worst = maxd(o.worst, worst_quad);
    o.passed = stable && worst_quad < 1e-10;
    return o;
}

} // namespace

int main() {
    bool ok = true;
    ok &= report("double_sine", crit_double_sine);
    ok &= report("qseries", crit_qseries);
    ok &= report("eigen_equations", crit_eigen);
    ok &= report("operator_square", crit_operator_square);
    ok &= report("poly_limits", crit_poly_limits);
    ok &= report("confluence", crit_confluence);
    ok &= report("symmetries", crit_symmetries);
    ok &= report("contour_robust", crit_contour);
    std::printf("%s  total %.1fs\n", ok ? "ALL PASS" : "SOME FAILED",
                g_total_s);
    return ok ? 0 : 1;
}
