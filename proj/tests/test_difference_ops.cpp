#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>
#include <vector>

#include "hypgeo/ops.hpp"

using namespace hypgeo;

namespace {

SchemeParams ref_params(Member m) {
    SchemeParams p;
    const double th[4] = {0.2, 0.3, 0.4, 0.15};
    for (int i = 0; i < member_theta_count(m); ++i) p.thetas.push_back(th[i]);
    p.v1 = 0.41;
    p.v2 = 0.17;
    return p;
}

double rel_diff(cplx a, cplx b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

const std::vector<OpVariant> kAllVariants = {
    OpVariant::primary, OpVariant::primary_binv, OpVariant::dual,
    OpVariant::dual_binv};

} // namespace

TEST_CASE("zero-shift coefficient equals its stated combination",
          "[ops]") {
    // Every three-term operator defines its 0-shift coefficient as a closed
    // expression minus the two shifted coefficients (possibly reflected);
    // verify that subtracting the shifted coefficients from the row sum of
    // the operator applied to the constant function reproduces it.
    BContext ctx(0.84);
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> U(0.1, 0.6);
    for (Member m : {Member::R, Member::H, Member::S, Member::X, Member::Q,
                     Member::L, Member::W, Member::M}) {
        for (OpVariant v : kAllVariants) {
            SchemeParams p = ref_params(m);
            ShiftOperatorSpec op = build_operator(ctx, m, v, p);
            INFO("member " << member_name(m) << " variant "
                           << variant_name(v));
            for (int k = 0; k < 100; ++k) {
                const cplx z(U(rng), 0.0);
                if (operator_singular_at(op, z, 1e-6)) continue;
                // applying to f = 1 must equal the plain coefficient sum
                cplx direct(0.0, 0.0);
                for (const OpTerm& t : op.terms) direct += t.coeff(z);
                const cplx applied =
                    apply_operator(op, [](cplx) { return cplx(1.0, 0.0); },
                                   z);
                REQUIRE(rel_diff(applied, direct) < 1e-13);
            }
        }
    }
}

TEST_CASE("binv variants equal the b -> 1/b coefficient substitution",
          "[ops]") {
    BContext ctx(0.84);
    BContext ctx_inv(1.0 / 0.84);
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> U(0.1, 0.6);
    for (Member m : {Member::R, Member::H, Member::S, Member::X, Member::Q,
                     Member::L, Member::W, Member::M}) {
        SchemeParams p = ref_params(m);
        for (auto [bv, pv] :
             {std::pair{OpVariant::primary_binv, OpVariant::primary},
              std::pair{OpVariant::dual_binv, OpVariant::dual}}) {
            ShiftOperatorSpec a = build_operator(ctx, m, bv, p);
            ShiftOperatorSpec b = build_operator(ctx_inv, m, pv, p);
            INFO("member " << member_name(m) << " variant "
                           << variant_name(bv));
            REQUIRE(a.terms.size() == b.terms.size());
            CHECK(rel_diff(a.eigenvalue, b.eigenvalue) < 1e-13);
            for (int k = 0; k < 25; ++k) {
                const cplx z(U(rng), 0.0);
                if (operator_singular_at(a, z, 1e-6)) continue;
                for (std::size_t t = 0; t < a.terms.size(); ++t) {
                    CHECK(std::abs(a.terms[t].shift - b.terms[t].shift) <
                          1e-14);
                    CHECK(rel_diff(a.terms[t].coeff(z), b.terms[t].coeff(z)) <
                          1e-13);
                }
            }
        }
    }
}

TEST_CASE("half-shift operator squares to the full operator", "[ops]") {
    // pure coefficient algebra on analytic test functions; no integrals
    BContext ctx(0.84);
    SchemeParams p = ref_params(Member::Q);
    const std::vector<std::function<cplx(cplx)>> basis = {
        [](cplx z) { return std::exp(0.3 * z); },
        [](cplx z) { return std::exp(-1.1 * z); },
        [](cplx z) { return std::cosh(0.7 * z) + 2.0; },
        [](cplx z) { return z * z + cplx(0.5, 0.25) * z + 1.0; },
        [](cplx z) { return std::exp(iu * 2.0 * z); }, // rapidly oscillating
    };
    for (OpVariant sq : {OpVariant::sqrt, OpVariant::sqrt_binv}) {
        ShiftOperatorSpec half = build_operator(ctx, Member::Q, sq, p);
        ShiftOperatorSpec full = build_operator(
            ctx, Member::Q,
            sq == OpVariant::sqrt ? OpVariant::primary
                                  : OpVariant::primary_binv,
            p);
        CHECK(rel_diff(half.eigenvalue * half.eigenvalue, full.eigenvalue) <
              1e-13);
        for (const auto& f : basis) {
            for (double s : {0.5, 0.37, 0.62}) {
                const cplx z(s, 0.0);
                auto once = [&](cplx w) { return apply_operator(half, f, w); };
                const cplx twice = apply_operator(half, once, z);
                const cplx direct = apply_operator(full, f, z);
                INFO("variant " << variant_name(sq) << " at sigma = " << s);
                CHECK(rel_diff(twice, direct) < 1e-10);
            }
        }
    }
}

TEST_CASE("eigen equations hold at the reference point", "[ops][slow]") {
    // one full-precision eigen check per member on each side (coefficient
    // closures against actual function evaluations at complex shifts)
    BContext ctx(0.84);
    for (Member m : {Member::H, Member::W}) {
        for (OpVariant v : {OpVariant::primary, OpVariant::dual}) {
            SchemeParams p = ref_params(m);
            ShiftOperatorSpec op = build_operator(ctx, m, v, p);
            const cplx v0 = op.acts_on == 1 ? p.v1 : p.v2;
            auto f = [&](cplx z) {
                SchemeParams q = p;
                (op.acts_on == 1 ? q.v1 : q.v2) = z;
                return scheme_evaluate(ctx, m, q).value;
            };
            const cplx lhs = apply_operator(op, f, v0);
            const cplx rhs = op.eigenvalue * f(v0);
            INFO("member " << member_name(m) << " variant "
                           << variant_name(v));
            CHECK(std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-8) < 1e-6);
        }
    }
}

TEST_CASE("dual eigenvalue sign of the lowest member adjudicates to minus",
          "[ops][slow]") {
    BContext ctx(0.84);
    SchemeParams p = ref_params(Member::M);
    auto f = [&](cplx z) {
        SchemeParams q = p;
        q.v2 = z;
        return scheme_evaluate(ctx, Member::M, q).value;
    };
    double res[2];
    int i = 0;
    for (MDualSign s : {MDualSign::minus, MDualSign::plus}) {
        ShiftOperatorSpec op =
            build_operator(ctx, Member::M, OpVariant::dual_binv, p, s);
        const cplx lhs = apply_operator(op, f, p.v2);
        const cplx rhs = op.eigenvalue * f(p.v2);
        res[i++] = std::abs(lhs - rhs) / std::abs(rhs);
    }
    CHECK(res[0] < 1e-6);  // minus sign satisfies the equation
    CHECK(res[1] > 1e-2);  // plus sign (as printed) does not
}

TEST_CASE("robust mode perturbs points on coefficient poles", "[ops]") {
    BContext ctx(0.84);
    SchemeParams p = ref_params(Member::H);
    ShiftOperatorSpec op = build_operator(ctx, Member::H, OpVariant::primary, p);
    std::vector<std::string> warnings;
    const cplx bad(0.0, 0.0); // sinh(2 pi b sigma) vanishes
    REQUIRE(operator_singular_at(op, bad));
    const cplx moved = regularize_point(ctx, op, bad, &warnings);
    CHECK(std::abs(moved - bad) > 0.0);
    CHECK(warnings.size() == 1);
    const cplx good(0.41, 0.0);
    CHECK(regularize_point(ctx, op, good, &warnings) == good);
    CHECK(warnings.size() == 1);

    CHECK_THROWS_AS(build_operator(ctx, Member::H, OpVariant::sqrt, p),
                    domain_error);
}
