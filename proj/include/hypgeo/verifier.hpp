#ifndef HYPGEO_VERIFIER_HPP
#define HYPGEO_VERIFIER_HPP

// Identity checks with quantitative residuals: every eigen equation,
// symmetry, polynomial limit, confluence edge, and the operator square
// identity, individually or aggregated into a deterministic suite report.

#include <algorithm>
#include <functional>
#include <future>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "double_sine.hpp"
#include "ops.hpp"
#include "qseries.hpp"
#include "scheme.hpp"

namespace hypgeo {

struct CheckReport {
    std::string check_id;
    std::string inputs;       // echoed descriptor
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::vector<std::string> notes;
};

struct SuiteReport {
    std::vector<CheckReport> checks;
    unsigned seed = 0;
    // category -> (passed, total)
    std::map<std::string, std::pair<int, int>> totals;
};

namespace detail {

inline CheckReport make_report(std::string id, std::string inputs,
                               double residual, double tol,
                               std::vector<std::string> notes = {}) {
    CheckReport r;
    r.check_id = std::move(id);
    r.inputs = std::move(inputs);
    r.residual = residual;
    r.tolerance = tol;
    r.passed = residual <= tol;
    r.notes = std::move(notes);
    return r;
}

inline double rel_resid(cplx got, cplx want) {
    const double ref = std::abs(want);
    // relative where the reference magnitude allows, absolute otherwise
    return std::abs(got - want) / std::max(ref, 1e-8);
}

inline std::string params_str(const SchemeParams& p) {
    std::ostringstream os;
    os.precision(17);
    os << "thetas=[";
    for (std::size_t i = 0; i < p.thetas.size(); ++i) {
        if (i) os << ",";
        os << p.thetas[i].real();
        if (p.thetas[i].imag() != 0.0) os << (p.thetas[i].imag() >= 0 ? "+" : "")
                                          << p.thetas[i].imag() << "i";
    }
    os << "] v1=" << p.v1.real();
    if (p.v1.imag() != 0.0) os << "+" << p.v1.imag() << "i";
    os << " v2=" << p.v2.real();
    if (p.v2.imag() != 0.0) os << "+" << p.v2.imag() << "i";
    return os.str();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Individual checks
// ---------------------------------------------------------------------------

inline CheckReport check_eigen(const BContext& ctx, Member m, OpVariant var,
                               const SchemeParams& p, double tol,
                               MDualSign m_sign = MDualSign::minus,
                               bool robust = true) {
    ShiftOperatorSpec op = build_operator(ctx, m, var, p, m_sign);
    std::vector<std::string> notes;
    SchemeParams q = p;
    cplx& acted = (op.acts_on == 1) ? q.v1 : q.v2;
    if (robust) acted = regularize_point(ctx, op, acted, &notes);
    // rebuild so the eigenvalue tracks a perturbed companion variable
    op = build_operator(ctx, m, var, q, m_sign);
    auto f = [&](cplx z) {
        SchemeParams r = q;
        (op.acts_on == 1 ? r.v1 : r.v2) = z;
        return scheme_evaluate(ctx, m, r).value;
    };
    const cplx point = (op.acts_on == 1) ? q.v1 : q.v2;
    // accumulate the applied operator term by term so the residual can be
    // normalized by the scale of what is actually summed: the terms may
    // cancel by many orders of magnitude, and dividing by the small result
    // would only measure that cancellation amplifying evaluation noise
    cplx lhs = 0.0;
    double scale = 0.0;
    for (const OpTerm& t : op.terms) {
        const cplx contrib = t.coeff(point) * f(point + t.shift);
        scale = std::max(scale, std::abs(contrib));
        lhs += contrib;
    }
    const cplx rhs = op.eigenvalue * f(point);
    scale = std::max({scale, std::abs(rhs), 1e-8});
    CheckReport r = detail::make_report(
        "eigen/" + member_name(m) + "/" + variant_name(var),
        detail::params_str(q), std::abs(lhs - rhs) / scale, tol,
        std::move(notes));
    return r;
}

enum class SymmetryKind { b_inversion, evenness, self_duality, sb_inversion };

inline std::string symmetry_name(SymmetryKind k) {
    switch (k) {
        case SymmetryKind::b_inversion: return "b_inversion";
        case SymmetryKind::evenness: return "evenness";
        case SymmetryKind::self_duality: return "self_duality";
        case SymmetryKind::sb_inversion: return "sb_inversion";
    }
    return "?";
}

inline CheckReport check_symmetry(const BContext& ctx, Member m,
                                  SymmetryKind kind, const SchemeParams& p,
                                  double tol) {
    double resid = 0.0;
    switch (kind) {
        case SymmetryKind::b_inversion: {
            const cplx a = scheme_evaluate(ctx, m, p).value;
            const cplx b = scheme_evaluate(BContext(1.0 / ctx.b), m, p).value;
            resid = detail::rel_resid(a, b);
            break;
        }
        case SymmetryKind::evenness: {
            // top member is even in both variables
            const cplx a = scheme_evaluate(ctx, m, p).value;
            SchemeParams q = p;
            q.v1 = -q.v1;
            const cplx b = scheme_evaluate(ctx, m, q).value;
            q = p;
            q.v2 = -q.v2;
            const cplx c = scheme_evaluate(ctx, m, q).value;
            resid = std::max(detail::rel_resid(a, b), detail::rel_resid(a, c));
            break;
        }
        case SymmetryKind::self_duality: {
            if (m != Member::R)
                throw domain_error("check_symmetry: self-duality is a "
                                   "property of the top member only");
            const cplx a = scheme_evaluate(ctx, m, p).value;
            SchemeParams q = p;
            std::swap(q.thetas[0], q.thetas[3]); // exchange outer thetas
            std::swap(q.v1, q.v2);
            const cplx b = scheme_evaluate(ctx, m, q).value;
            resid = detail::rel_resid(a, b);
            break;
        }
        case SymmetryKind::sb_inversion: {
            const cplx z = p.v1;
            const cplx prod = sb(ctx, z) * sb(ctx, -z);
            resid = std::abs(prod - 1.0);
            break;
        }
    }
    return detail::make_report(
        "symmetry/" + member_name(m) + "/" + symmetry_name(kind),
        detail::params_str(p), resid, tol);
}

inline CheckReport check_poly_limit(const BContext& ctx, Member m, int var,
                                    const SchemeParams& p, int n_max,
                                    double tol) {
    const DiscretizationLattice lat = make_lattice(ctx, m, p, var);
    const PolyMap map = poly_param_map(ctx, m, p, var);
    double worst = 0.0;
    std::vector<std::string> notes;
    for (int n = 0; n <= n_max; ++n) {
        const cplx got = scheme_evaluate_at_lattice(ctx, m, p, lat, n);
        const cplx want = qpoly_eval(map.family, n, map.params, map.q, map.arg);
        worst = std::max(worst, detail::rel_resid(got, want));
        if (n == 0 && std::abs(got - 1.0) > 1e-7)
            notes.push_back("lattice n=0 deviates from 1 by more than 1e-7");
    }
    return detail::make_report(
        "poly_limit/" + member_name(m) + "/var" + std::to_string(var),
        detail::params_str(p) + " n<=" + std::to_string(n_max), worst, tol,
        std::move(notes));
}

inline CheckReport check_confluence(const BContext& ctx, ConfluenceEdge e,
                                    const SchemeParams& child_params,
                                    const std::vector<double>& mags,
                                    double tol) {
    const Member child = edge_child(e);
    const cplx target = scheme_evaluate(ctx, child, child_params).value;
    std::vector<std::string> notes;
    double prev = 1e300, last = 0.0;
    bool monotone = true;
    for (double mag : mags) {
        const double Lambda = edge_lambda_sign(e) * mag;
        const Confluence emb = confluence_embed(ctx, e, child_params, Lambda);
        const cplx approx =
            emb.normalizer *
            scheme_evaluate(ctx, emb.parent, emb.parent_params).value;
        last = std::abs(approx - target) /
               std::max({1.0, std::abs(approx), std::abs(target)});
        if (!(last < std::max(prev * 1.2, 1e-12))) monotone = false;
        prev = last;
    }
    if (!monotone)
        notes.push_back("residuals did not decrease monotonically");
    CheckReport r = detail::make_report(
        "confluence/" + edge_name(e), detail::params_str(child_params), last,
        tol, std::move(notes));
    r.passed = r.passed && monotone;
    return r;
}

inline CheckReport check_operator_square(const BContext& ctx,
                                         const SchemeParams& p, double tol) {
    const std::vector<std::function<cplx(cplx)>> basis = {
        [](cplx z) { return std::exp(0.3 * z); },
        [](cplx z) { return std::exp(-1.1 * z); },
        [](cplx z) { return std::cosh(0.7 * z) + 2.0; },
        [](cplx z) { return z * z + cplx(0.5, 0.25) * z + 1.0; },
        [](cplx z) { return std::exp(iu * 2.0 * z); },
    };
    const ShiftOperatorSpec half =
        build_operator(ctx, Member::Q, OpVariant::sqrt, p);
    const ShiftOperatorSpec full =
        build_operator(ctx, Member::Q, OpVariant::primary, p);
    double worst = 0.0;
    for (const auto& f : basis) {
        for (double s : {0.5, 0.37, 0.62}) {
            auto once = [&](cplx w) { return apply_operator(half, f, w); };
            const cplx twice = apply_operator(half, once, cplx(s, 0.0));
            const cplx direct = apply_operator(full, f, cplx(s, 0.0));
            worst = std::max(worst, std::abs(twice - direct) /
                                        std::max(1.0, std::abs(direct)));
        }
    }
    return detail::make_report("operator_square/Q", detail::params_str(p),
                               worst, tol);
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

struct VerifierConfig {
    double b = 0.84;
    unsigned seed = 20240817;
    int eigen_random_points = 0;   // extra seeded draws per eigen equation
    int symmetry_random_points = 3;
    double tol_identities = 1e-8;  // s_b / q-series
    double tol_eigen = 1e-6;
    double tol_limits = 1e-5;      // polynomial limits and confluences
    double tol_square = 1e-10;
    bool include_scheme_checks = true; // false -> q-series/s_b only
};

namespace detail {

inline SchemeParams reference_params(Member m) {
    SchemeParams p;
    const double th[4] = {0.2, 0.3, 0.4, 0.15};
    for (int i = 0; i < member_theta_count(m); ++i) p.thetas.push_back(th[i]);
    p.v1 = 0.41;
    p.v2 = 0.17;
    return p;
}

// run jobs (possibly concurrently) and keep the submission order
inline std::vector<CheckReport>
run_jobs(const std::vector<std::function<CheckReport()>>& jobs) {
    const int workers = std::min<int>(thread_count(), (int)jobs.size());
    std::vector<CheckReport> out(jobs.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) out[i] = jobs[i]();
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            out[i] = jobs[i]();
        }
    };
    std::vector<std::future<void>> fs;
    for (int w = 0; w < workers; ++w)
        fs.push_back(std::async(std::launch::async, worker));
    for (auto& f : fs) f.get();
    return out;
}

} // namespace detail

// Every (member, variant) pair entering the eigen-equation enumeration: the
// four-variant set for the six three-term members, the half-shift pair plus
// the dual pair for Q, and the primary pair for the lowest member (its dual
// pair carries the adjudicated sign and is reported separately). 30 total.
inline std::vector<std::pair<Member, OpVariant>> eigen_equation_list() {
    std::vector<std::pair<Member, OpVariant>> out;
    const OpVariant four[4] = {OpVariant::primary, OpVariant::primary_binv,
                               OpVariant::dual, OpVariant::dual_binv};
    for (Member m : {Member::R, Member::H, Member::S, Member::X, Member::L,
                     Member::W})
        for (OpVariant v : four) out.emplace_back(m, v);
    out.emplace_back(Member::Q, OpVariant::sqrt);
    out.emplace_back(Member::Q, OpVariant::sqrt_binv);
    out.emplace_back(Member::Q, OpVariant::dual);
    out.emplace_back(Member::Q, OpVariant::dual_binv);
    out.emplace_back(Member::M, OpVariant::primary);
    out.emplace_back(Member::M, OpVariant::primary_binv);
    return out;
}

// All discretization lattices with a polynomial limit (11 rows).
inline std::vector<std::pair<Member, int>> lattice_row_list() {
    return {{Member::R, 1}, {Member::R, 2}, {Member::H, 1}, {Member::H, 2},
            {Member::S, 1}, {Member::S, 2}, {Member::X, 2}, {Member::Q, 2},
            {Member::L, 1}, {Member::W, 1}, {Member::M, 1}};
}

inline std::vector<ConfluenceEdge> confluence_edge_list() {
    return {ConfluenceEdge::RtoH, ConfluenceEdge::HtoS, ConfluenceEdge::StoX,
            ConfluenceEdge::XtoQ, ConfluenceEdge::HtoL, ConfluenceEdge::LtoW,
            ConfluenceEdge::WtoM};
}

// Confluence test point for an edge: the lowest edge needs Im(v1+v2) > 0
// for its limit to converge, so it is lifted off the real axis.
inline SchemeParams confluence_child_params(ConfluenceEdge e) {
    SchemeParams p = detail::reference_params(edge_child(e));
    if (e == ConfluenceEdge::WtoM) p.v2 += cplx(0.0, 0.3);
    return p;
}

inline SuiteReport run_suite(const VerifierConfig& cfg = {}) {
    const BContext ctx(cfg.b);
    std::mt19937 rng(cfg.seed);
    std::uniform_real_distribution<double> U(0.1, 0.6);
    std::vector<std::function<CheckReport()>> jobs;
    std::vector<std::string> cats;
    auto add = [&](std::string cat, std::function<CheckReport()> j) {
        cats.push_back(std::move(cat));
        jobs.push_back(std::move(j));
    };

    // --- double sine identities -------------------------------------------
    for (int k = 0; k < cfg.symmetry_random_points; ++k) {
        const cplx z(U(rng), U(rng) - 0.35);
        add("sb", [ctx, z, cfg] {
            const double resid = std::abs(sb(ctx, z) * sb(ctx, -z) - 1.0);
            return detail::make_report("sb/inversion",
                                       "z=" + std::to_string(z.real()) + "+" +
                                           std::to_string(z.imag()) + "i",
                                       resid, cfg.tol_identities);
        });
        add("sb", [ctx, z, cfg] {
            // shift equation: sb(z + ib/2) = 2 cosh(pi b z) sb(z - ib/2)
            const cplx lhs = sb(ctx, z + iu * ctx.b / 2.0);
            const cplx rhs =
                2.0 * std::cosh(pi * ctx.b * z) * sb(ctx, z - iu * ctx.b / 2.0);
            return detail::make_report("sb/shift",
                                       "z=" + std::to_string(z.real()) + "+" +
                                           std::to_string(z.imag()) + "i",
                                       detail::rel_resid(lhs, rhs),
                                       cfg.tol_identities);
        });
    }

    // --- q-series: series vs recurrence and the three dualities ------------
    for (QPolyFamily fam :
         {QPolyFamily::AskeyWilson, QPolyFamily::ContinuousDualQHahn,
          QPolyFamily::AlSalamChihara, QPolyFamily::ContBigQHermite,
          QPolyFamily::ContQHermite, QPolyFamily::BigQJacobi,
          QPolyFamily::LittleQJacobi_Y, QPolyFamily::BigQLaguerre,
          QPolyFamily::LittleQLaguerre}) {
        add("qseries", [fam, cfg] {
            const cplx q(0.31, 0.41);
            const cplx x(0.8, 0.1);
            std::vector<cplx> par;
            for (std::size_t i = 0; i < family_param_count(fam); ++i)
                par.push_back(cplx(0.2 + 0.1 * i, 0.05));
            double worst = 0.0;
            for (int n = 0; n <= 5; ++n) {
                const cplx a =
                    qpoly_eval(fam, n, par, q, x, QPolyMode::series);
                const cplx b =
                    qpoly_eval(fam, n, par, q, x, QPolyMode::recurrence);
                worst = std::max(worst, detail::rel_resid(a, b));
            }
            return detail::make_report("qseries/modes/" + family_name(fam),
                                       "n<=5", worst, cfg.tol_identities);
        });
    }
    for (DualityKind kind :
         {DualityKind::askey_wilson, DualityKind::hahn_jacobi,
          DualityKind::chihara_littlejacobi}) {
        add("qseries", [kind, cfg] {
            const cplx q(0.36, 0.22);
            std::vector<cplx> par = {cplx(1.3, 0.2), cplx(0.4, -0.1),
                                     cplx(0.7, 0.3), cplx(0.2, 0.05)};
            par.resize(kind == DualityKind::askey_wilson ? 4
                       : kind == DualityKind::hahn_jacobi ? 3
                                                          : 2);
            double worst = 0.0;
            for (int n = 0; n <= 5; ++n)
                for (int m = 0; m <= 5; ++m) {
                    auto pr = qpoly_duality(kind, n, m, par, q);
                    worst = std::max(
                        worst, detail::rel_resid(pr.lhs, pr.rhs));
                }
            std::string namek =
                kind == DualityKind::askey_wilson ? "askey_wilson"
                : kind == DualityKind::hahn_jacobi ? "hahn_jacobi"
                                                   : "chihara_littlejacobi";
            return detail::make_report("qseries/duality/" + namek, "n,m<=5",
                                       worst, 1e-10);
        });
    }

    if (cfg.include_scheme_checks) {
        // --- eigen equations ------------------------------------------------
        for (auto [m, v] : eigen_equation_list()) {
            std::vector<SchemeParams> pts = {detail::reference_params(m)};
            for (int k = 0; k < cfg.eigen_random_points; ++k) {
                SchemeParams p = detail::reference_params(m);
                for (auto& t : p.thetas) t = U(rng);
                p.v1 = U(rng);
                p.v2 = U(rng);
                pts.push_back(p);
            }
            for (const SchemeParams& p : pts)
                add("eigen", [ctx, m = m, v = v, p, cfg] {
                    return check_eigen(ctx, m, v, p, cfg.tol_eigen);
                });
        }
        // M dual pair: adjudicated sign, reported separately
        for (OpVariant v : {OpVariant::dual, OpVariant::dual_binv}) {
            const SchemeParams p = detail::reference_params(Member::M);
            add("eigen_adjudicated", [ctx, v, p, cfg] {
                CheckReport r = check_eigen(ctx, Member::M, v, p,
                                            cfg.tol_eigen, MDualSign::minus);
                r.notes.push_back(
                    "dual 1/b eigenvalue sign adjudicated to minus; the "
                    "printed plus sign fails this equation");
                return r;
            });
        }

        // --- symmetries -----------------------------------------------------
        for (Member m : {Member::R, Member::H, Member::S, Member::X,
                         Member::Q, Member::L, Member::W, Member::M}) {
            const SchemeParams p = detail::reference_params(m);
            add("symmetry", [ctx, m, p, cfg] {
                return check_symmetry(ctx, m, SymmetryKind::b_inversion, p,
                                      cfg.tol_identities);
            });
        }
        {
            const SchemeParams p = detail::reference_params(Member::R);
            add("symmetry", [ctx, p, cfg] {
                return check_symmetry(ctx, Member::R,
                                      SymmetryKind::self_duality, p,
                                      cfg.tol_identities);
            });
            add("symmetry", [ctx, p, cfg] {
                return check_symmetry(ctx, Member::R, SymmetryKind::evenness,
                                      p, cfg.tol_identities);
            });
        }

        // --- polynomial limits ----------------------------------------------
        for (auto [m, var] : lattice_row_list()) {
            const SchemeParams p = detail::reference_params(m);
            add("poly_limit", [ctx, m = m, var = var, p, cfg] {
                return check_poly_limit(ctx, m, var, p, 3, cfg.tol_limits);
            });
        }

        // --- confluences ------------------------------------------------------
        for (ConfluenceEdge e : confluence_edge_list()) {
            add("confluence", [ctx, e, cfg] {
                return check_confluence(ctx, e, confluence_child_params(e),
                                        {8.0, 12.0, 16.0}, 1e-4);
            });
        }

        // --- operator square --------------------------------------------------
        add("operator_square", [ctx, cfg] {
            return check_operator_square(
                ctx, detail::reference_params(Member::Q), cfg.tol_square);
        });
    }

    SuiteReport rep;
    rep.seed = cfg.seed;
    rep.checks = detail::run_jobs(jobs);
    for (std::size_t i = 0; i < rep.checks.size(); ++i) {
        auto& t = rep.totals[cats[i]];
        t.second += 1;
        if (rep.checks[i].passed) t.first += 1;
    }
    return rep;
}

} // namespace hypgeo

#endif
