#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "hypgeo/bcontext.hpp"
#include "hypgeo/contour.hpp"

using namespace hypgeo;

TEST_CASE("gaussian integral on the real line", "[contour]") {
    ContourSpec spec;
    spec.waypoints = {cplx(-6.0, 0.0), cplx(6.0, 0.0)};
    auto r = integrate_contour([](cplx x) { return std::exp(-pi * x * x); },
                               spec);
    REQUIRE(std::abs(r.value - 1.0) < 1e-10);
    REQUIRE(r.warnings.empty());
}

TEST_CASE("gaussian integral is contour independent", "[contour]") {
    auto f = [](cplx x) { return std::exp(-pi * x * x); };
    ContourSpec spec;
    spec.waypoints = {cplx(-7.0, 0.3), cplx(-1.0, -0.8), cplx(2.0, 0.5),
                      cplx(7.0, -0.2)};
    auto r = integrate_contour(f, spec);
    REQUIRE(std::abs(r.value - 1.0) < 1e-10);
}

TEST_CASE("fresnel integral along a descending path", "[contour]") {
    BContext ctx(0.84);
    const double h = ctx.Q() / 4.0;
    // |e^{-i pi x^2}| = e^{2 pi t Im x}: the path must rise on the left and
    // fall on the right for both tails to decay
    ContourSpec spec;
    spec.waypoints = {cplx(-8.0, h), cplx(8.0, -h)};
    spec.phase_quad = 1.0;
    auto f = [](cplx x) { return std::exp(-iu * pi * x * x); };
    auto r = integrate_contour(f, spec);
    const cplx exact = std::exp(-iu * pi / 4.0);
    REQUIRE(std::abs(r.value - exact) < 1e-10);
}

TEST_CASE("fresnel value is stable under admissible deformations",
          "[contour]") {
    auto f = [](cplx x) { return std::exp(-iu * pi * x * x); };
    const cplx exact = std::exp(-iu * pi / 4.0);
    for (double h : {0.3, 0.55, 0.9}) {
        ContourSpec spec;
        spec.waypoints = {cplx(-8.0, h), cplx(-0.5, 0.2 * h), cplx(1.0, -0.3 * h),
                          cplx(8.0, -h)};
        spec.phase_quad = 1.0;
        auto r = integrate_contour(f, spec);
        REQUIRE(std::abs(r.value - exact) < 1e-10);
    }
}

TEST_CASE("pole with contour passing between two rays", "[contour]") {
    // f has simple poles at +-i/2; any contour threading between them on the
    // real line gives the same residue-free value
    auto f = [](cplx x) {
        return std::exp(-pi * x * x) / (x * x + 0.25);
    };
    ContourSpec flat;
    flat.waypoints = {cplx(-6.0, 0.0), cplx(6.0, 0.0)};
    ContourSpec wavy;
    wavy.waypoints = {cplx(-6.0, 0.0), cplx(-1.0, 0.3), cplx(0.5, -0.35),
                      cplx(6.0, 0.0)};
    auto r1 = integrate_contour(f, flat);
    auto r2 = integrate_contour(f, wavy);
    REQUIRE(std::abs(r1.value - r2.value) < 1e-10);
}

TEST_CASE("auto_contour threads between pole rays", "[contour]") {
    BContext ctx(0.84);
    std::vector<PoleLattice> up = {{cplx(0.3, 0.4), +1}, {cplx(-1.2, 0.7), +1}};
    std::vector<PoleLattice> down = {{cplx(0.3, -0.5), -1},
                                     {cplx(2.0, -0.2), -1}};
    TailRule tail; // preferred height 0
    auto spec = auto_contour(up, down, tail, ctx);
    REQUIRE(spec.waypoints.size() >= 2);
    const double margin = 1e-3 * ctx.Q();
    for (const auto& p : up)
        REQUIRE(spec.height_at(p.base.real()) < p.base.imag() - 0.999 * margin);
    for (const auto& p : down)
        REQUIRE(spec.height_at(p.base.real()) > p.base.imag() + 0.999 * margin);
}

TEST_CASE("auto_contour clamps tails via caps", "[contour]") {
    BContext ctx(0.84);
    std::vector<PoleLattice> up = {{cplx(0.0, 0.05), +1}};
    std::vector<PoleLattice> down;
    TailRule tail;
    tail.preferred = 0.0;
    tail.left_cap = -0.1;
    auto spec = auto_contour(up, down, tail, ctx);
    REQUIRE(spec.waypoints.front().imag() <= -0.1 + 1e-15);
}

TEST_CASE("auto_contour reports pinches", "[contour]") {
    BContext ctx(0.84);
    const double margin = 1e-3 * ctx.Q();
    std::vector<PoleLattice> up = {{cplx(0.7, 0.5 * margin), +1}};
    std::vector<PoleLattice> down = {{cplx(0.7, -0.5 * margin), -1}};
    TailRule tail;
    REQUIRE_THROWS_AS(auto_contour(up, down, tail, ctx), pinch_error);
}

TEST_CASE("non-decaying tail raises a warning", "[contour]") {
    // constant integrand never decays; the engine must flag it rather than
    // silently return a finite number
    ContourSpec spec;
    spec.waypoints = {cplx(-2.0, 0.0), cplx(2.0, 0.0)};
    QuadratureConfig cfg;
    cfg.max_reach = 40.0;
    auto r = integrate_contour([](cplx) { return cplx(1.0, 0.0); }, spec, cfg);
    REQUIRE_FALSE(r.warnings.empty());
}
