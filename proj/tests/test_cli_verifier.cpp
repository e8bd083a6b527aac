#include <catch2/catch_amalgamated.hpp>

#include "hypgeo/verifier.hpp"

using namespace hypgeo;

TEST_CASE("reports carry pass/fail from the residual-tolerance comparison") {
    CheckReport ok = detail::make_report("x", "", 1e-9, 1e-8);
    CHECK(ok.passed);
    CheckReport bad = detail::make_report("x", "", 2e-8, 1e-8);
    CHECK_FALSE(bad.passed);
    CheckReport edge = detail::make_report("x", "", 1e-8, 1e-8);
    CHECK(edge.passed); // inclusive at the boundary
}

TEST_CASE("relative residual falls back to absolute for tiny references") {
    CHECK(detail::rel_resid(cplx(2.0, 0.0), cplx(1.0, 0.0)) == Catch::Approx(1.0));
    // reference ~0: measured against the 1e-8 floor, not a division blow-up
    CHECK(detail::rel_resid(cplx(1e-12, 0.0), cplx(0.0, 0.0)) < 1e-3);
}

TEST_CASE("q-series-only suite runs fast and needs no contour machinery") {
    VerifierConfig cfg;
    cfg.include_scheme_checks = false;
    const SuiteReport rep = run_suite(cfg);
    REQUIRE(rep.totals.count("sb") == 1);
    REQUIRE(rep.totals.count("qseries") == 1);
    CHECK(rep.totals.size() == 2); // nothing else scheduled
    for (const auto& [cat, pt] : rep.totals) {
        INFO(cat);
        CHECK(pt.first == pt.second);
    }
}

TEST_CASE("identical seeds give identical reports") {
    VerifierConfig cfg;
    cfg.include_scheme_checks = false;
    cfg.seed = 424242;
    const SuiteReport a = run_suite(cfg);
    const SuiteReport b = run_suite(cfg);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].check_id == b.checks[i].check_id);
        CHECK(a.checks[i].inputs == b.checks[i].inputs);
        CHECK(a.checks[i].residual == b.checks[i].residual);
    }
}

TEST_CASE("different seeds move the sampled points") {
    VerifierConfig a, b;
    a.include_scheme_checks = b.include_scheme_checks = false;
    a.seed = 1;
    b.seed = 2;
    const SuiteReport ra = run_suite(a), rb = run_suite(b);
    bool any_diff = false;
    for (std::size_t i = 0; i < ra.checks.size(); ++i)
        if (ra.checks[i].inputs != rb.checks[i].inputs) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("single eigen check runs end to end", "[slow]") {
    BContext ctx(0.84);
    SchemeParams p = detail::reference_params(Member::M);
    const CheckReport r =
        check_eigen(ctx, Member::M, OpVariant::primary, p, 1e-6);
    CHECK(r.passed);
    CHECK(r.residual < 1e-6);
    CHECK(r.check_id == "eigen/M/primary");
}

TEST_CASE("symmetry check flags a deliberately broken tolerance", "[slow]") {
    BContext ctx(0.84);
    const CheckReport r =
        check_symmetry(ctx, Member::M, SymmetryKind::b_inversion,
                       detail::reference_params(Member::M), 1e-30);
    CHECK_FALSE(r.passed); // residual is tiny but not below an absurd bound
    CHECK(r.residual < 1e-8);
}

TEST_CASE("category totals add up to the number of checks") {
    VerifierConfig cfg;
    cfg.include_scheme_checks = false;
    const SuiteReport rep = run_suite(cfg);
    int total = 0;
    for (const auto& [cat, pt] : rep.totals) total += pt.second;
    CHECK(total == (int)rep.checks.size());
}
