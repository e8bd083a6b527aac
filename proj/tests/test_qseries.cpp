#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "hypgeo/bcontext.hpp"
#include "hypgeo/qseries.hpp"

using namespace hypgeo;

namespace {
double rel(cplx got, cplx want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}
const cplx q_ref = BContext(0.84).q(); // e^{2 i pi 0.7056}, |q| = 1
} // namespace

TEST_CASE("q-Pochhammer basics") {
    cplx q(0.3, 0.1), a(0.5, -0.2);
    CHECK(qpoch(a, q, 0) == cplx(1.0, 0.0));
    CHECK(rel(qpoch(a, q, 1), 1.0 - a) < 1e-15);
    CHECK(rel(qpoch(a, q, 3), (1.0 - a) * (1.0 - a * q) * (1.0 - a * q * q)) <
          1e-15);
}

TEST_CASE("terminating hypergeometric series stops at the q^{-n} factor") {
    cplx q = q_ref;
    // 1phi0 with a = q^{-2} summed at z: only 3 terms
    cplx direct = 1.0 + (1.0 - 1.0 / (q * q)) / (1.0 - q) * cplx(0.7, 0.0) +
                  (1.0 - 1.0 / (q * q)) * (1.0 - 1.0 / q) /
                      ((1.0 - q) * (1.0 - q * q)) * cplx(0.49, 0.0);
    CHECK(rel(qhyper({1.0 / (q * q)}, {}, q, 0.7), direct) < 1e-14);
}

TEST_CASE("Askey-Wilson values match an independent high-precision sum") {
    // frozen from a 40-digit direct summation of the defining series
    std::vector<cplx> p{{1.3, 0.2}, {0.4, -0.1}, {0.7, 0.3}, {0.2, 0.05}};
    cplx z(0.9, 0.4);
    CHECK(rel(qpoly_eval(QPolyFamily::AskeyWilson, 2, p, q_ref, z),
              {6.319069968455519604e-01, -2.714479532748621082e+00}) < 1e-13);
    CHECK(rel(qpoly_eval(QPolyFamily::AskeyWilson, 5, p, q_ref, z),
              {-2.951154606490416388e+00, -1.359979380619940414e+01}) < 1e-13);
}

TEST_CASE("series and recurrence modes agree for every family") {
    const cplx z(0.9, 0.4), x(0.35, 0.15);
    struct Case {
        QPolyFamily f;
        std::vector<cplx> p;
        cplx arg;
    };
    const Case cases[] = {
        {QPolyFamily::AskeyWilson, {{1.3, 0.2}, {0.4, -0.1}, {0.7, 0.3}, {0.2, 0.05}}, z},
        {QPolyFamily::ContinuousDualQHahn, {{1.3, 0.2}, {0.4, -0.1}, {0.7, 0.3}}, z},
        {QPolyFamily::BigQJacobi, {{0.6, 0.1}, {0.4, -0.2}, {0.3, 0.2}}, x},
        {QPolyFamily::AlSalamChihara, {{1.3, 0.2}, {0.4, -0.1}}, z},
        {QPolyFamily::LittleQJacobi_p, {{0.6, 0.1}, {0.4, -0.2}}, x},
        {QPolyFamily::LittleQJacobi_Y, {{0.6, 0.1}, {0.4, -0.2}}, x},
        {QPolyFamily::BigQLaguerre, {{0.6, 0.1}, {0.4, -0.2}}, x},
        {QPolyFamily::LittleQLaguerre, {{0.6, 0.1}}, x},
        {QPolyFamily::ContBigQHermite, {{1.3, 0.2}}, z},
        {QPolyFamily::ContQHermite, {}, z},
    };
    for (const auto& c : cases) {
        for (int n : {0, 1, 2, 3, 6}) {
            cplx s = qpoly_eval(c.f, n, c.p, q_ref, c.arg, QPolyMode::series);
            cplx r =
                qpoly_eval(c.f, n, c.p, q_ref, c.arg, QPolyMode::recurrence);
            INFO(family_name(c.f) << " n=" << n);
            CHECK(rel(s, r) < 1e-10);
        }
    }
}

TEST_CASE("degenerations between families at finite degree") {
    const cplx z(0.9, 0.4), x(0.35, 0.15);
    std::vector<cplx> p4{{1.3, 0.2}, {0.4, -0.1}, {0.7, 0.3}, {0.0, 0.0}};
    for (int n : {1, 3, 5}) {
        // H_n = R_n with delta = 0
        CHECK(rel(qpoly_eval(QPolyFamily::AskeyWilson, n, p4, q_ref, z),
                  qpoly_eval(QPolyFamily::ContinuousDualQHahn, n,
                             {p4[0], p4[1], p4[2]}, q_ref, z)) < 1e-12);
        // S_n = H_n with gamma = 0
        CHECK(rel(qpoly_eval(QPolyFamily::ContinuousDualQHahn, n,
                             {p4[0], p4[1], 0.0}, q_ref, z),
                  qpoly_eval(QPolyFamily::AlSalamChihara, n, {p4[0], p4[1]},
                             q_ref, z)) < 1e-12);
        // X_n = S_n with beta = 0
        CHECK(rel(qpoly_eval(QPolyFamily::AlSalamChihara, n, {p4[0], 0.0},
                             q_ref, z),
                  qpoly_eval(QPolyFamily::ContBigQHermite, n, {p4[0]}, q_ref,
                             z)) < 1e-12);
        // Q_n = lim alpha^{-n} X_n as alpha -> 0
        cplx alpha(1e-8, 0.0);
        cplx xa = qpoly_eval(QPolyFamily::ContBigQHermite, n, {alpha}, q_ref, z);
        for (int k = 0; k < n; ++k) xa /= alpha;
        CHECK(rel(xa, qpoly_eval(QPolyFamily::ContQHermite, n, {}, q_ref, z)) <
              1e-5);
        // J_n(gamma q x) -> p_n(x) as gamma -> infinity
        cplx gamma(1e8, 0.0);
        CHECK(rel(qpoly_eval(QPolyFamily::BigQJacobi, n,
                             {{0.6, 0.1}, {0.4, -0.2}, gamma}, q_ref,
                             gamma * q_ref * x),
                  qpoly_eval(QPolyFamily::LittleQJacobi_p, n,
                             {{0.6, 0.1}, {0.4, -0.2}}, q_ref, x)) < 1e-5);
        // Y_n = J_n with gamma -> 0
        cplx gamma0(1e-9, 0.0);
        CHECK(rel(qpoly_eval(QPolyFamily::BigQJacobi, n,
                             {{0.6, 0.1}, {0.4, -0.2}, gamma0}, q_ref, x),
                  qpoly_eval(QPolyFamily::LittleQJacobi_Y, n,
                             {{0.6, 0.1}, {0.4, -0.2}}, q_ref, x)) < 1e-6);
    }
}

TEST_CASE("duality formulas") {
    for (int n : {0, 1, 2, 4}) {
        for (int m : {0, 1, 3}) {
            auto aw = qpoly_duality(DualityKind::askey_wilson, n, m,
                                    {{1.3, 0.2}, {0.4, -0.1}, {0.7, 0.3}, {0.2, 0.05}},
                                    q_ref);
            CHECK(rel(aw.lhs, aw.rhs) < 1e-10);
            auto hj = qpoly_duality(DualityKind::hahn_jacobi, n, m,
                                    {{1.3, 0.2}, {0.4, -0.1}, {0.7, 0.3}}, q_ref);
            CHECK(rel(hj.lhs, hj.rhs) < 1e-10);
            auto sy = qpoly_duality(DualityKind::chihara_littlejacobi, n, m,
                                    {{1.3, 0.2}, {0.4, -0.1}}, q_ref);
            CHECK(rel(sy.lhs, sy.rhs) < 1e-10);
        }
    }
}

TEST_CASE("parameter count validation") {
    CHECK_THROWS_AS(qpoly_eval(QPolyFamily::AskeyWilson, 1, {{1.0, 0.0}}, q_ref,
                               cplx(1.0, 0.0)),
                    domain_error);
    CHECK_THROWS_AS(qpoly_eval(QPolyFamily::ContQHermite, -1, {}, q_ref,
                               cplx(1.0, 0.0)),
                    domain_error);
}
