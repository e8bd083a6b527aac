#ifndef HYPGEO_CONTOUR_HPP
#define HYPGEO_CONTOUR_HPP

// Contour construction and integration. A contour runs from -infinity to
// +infinity as a piecewise-linear path: constant-height tails outside the
// window and waypoints inside. auto_contour places the path strictly below
// every upward pole ray and strictly above every downward one; since the ray
// generators are purely imaginary, each ray constrains the path only at the
// real part of its base, so per-column clamping suffices and never produces
// false pinches.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bcontext.hpp"
#include "common.hpp"
#include "quadrature.hpp"

namespace hypgeo {

// Semi-infinite vertical ray of poles base + i(mb + l/b) (direction = +1)
// or base - i(mb + l/b) (direction = -1), m,l >= 0.
struct PoleLattice {
    cplx base;
    int direction = +1;
};

struct ContourSpec {
    std::vector<cplx> waypoints; // strictly increasing real parts
    // tails continue horizontally at the heights of the end waypoints
    double phase_quad = 0.0;  // |quadratic phase coefficient| hint (pi units)
    double linear_freq = 0.0; // x-independent oscillation rate hint (rad/unit)
    double rel_noise = 1e-13; // relative evaluation-noise level of the integrand

    double height_at(double t) const {
        if (waypoints.empty()) return 0.0;
        if (t <= waypoints.front().real()) return waypoints.front().imag();
        if (t >= waypoints.back().real()) return waypoints.back().imag();
        for (std::size_t k = 0; k + 1 < waypoints.size(); ++k) {
            double a = waypoints[k].real(), b = waypoints[k + 1].real();
            if (t <= b) {
                double s = (b > a) ? (t - a) / (b - a) : 0.0;
                return waypoints[k].imag() +
                       s * (waypoints[k + 1].imag() - waypoints[k].imag());
            }
        }
        return waypoints.back().imag();
    }
};

struct QuadratureConfig {
    double abs_tol = 1e-10;
    int max_depth = 22;
    double tail_seg = 2.0;   // length of one tail extension step
    int tail_stop = 3;       // negligible consecutive segments before stopping
    double max_reach = 300.0; // absolute bound on |Re x| during tail extension
    double sep_margin_scale = 1e-3; // minimum pole separation, in units of Q
};

struct TailRule {
    // preferred path height in the window, plus per-side bounds on the tail
    // heights dictated by the integrand's decay condition: caps are upper
    // bounds, floors are lower bounds; +-inf when absent
    double preferred = 0.0;
    double left_cap = 1e300;
    double right_cap = 1e300;
    double left_floor = -1e300;
    double right_floor = -1e300;
};

namespace detail {

struct Column {
    double re = 0.0;
    double lo = -1e300; // must stay above (downward rays)
    double hi = 1e300;  // must stay below (upward rays)
};

inline std::vector<Column> collect_columns(const std::vector<PoleLattice>& up,
                                           const std::vector<PoleLattice>& down,
                                           double group_tol) {
    std::vector<Column> cols;
    auto add = [&](cplx base, int dir) {
        for (auto& c : cols) {
            if (std::fabs(c.re - base.real()) < group_tol) {
                if (dir > 0) c.hi = std::min(c.hi, base.imag());
                else c.lo = std::max(c.lo, base.imag());
                return;
            }
        }
        Column c;
        c.re = base.real();
        if (dir > 0) c.hi = base.imag();
        else c.lo = base.imag();
        cols.push_back(c);
    };
    for (const auto& p : up) add(p.base, +1);
    for (const auto& p : down) add(p.base, -1);
    std::sort(cols.begin(), cols.end(),
              [](const Column& a, const Column& b) { return a.re < b.re; });
    return cols;
}

} // namespace detail

// Build a separating contour. Throws pinch_error when an up and a down ray
// leave no corridor at some real part.
inline ContourSpec auto_contour(const std::vector<PoleLattice>& up,
                                const std::vector<PoleLattice>& down,
                                const TailRule& tail, const BContext& ctx,
                                const QuadratureConfig& cfg = {}) {
    const double Q = ctx.Q();
    const double margin = cfg.sep_margin_scale * Q;
    auto cols = detail::collect_columns(up, down, margin);

    // window wide enough to put every constraint column strictly inside
    double X = 8.0;
    for (const auto& c : cols) X = std::max(X, std::fabs(c.re) + 2.0);

    auto clampH = [&](double h, const detail::Column& c) {
        if (c.hi - c.lo < 2.0 * margin)
            throw pinch_error("auto_contour: pole corridor pinched at Re x = " +
                                  format_real(c.re),
                              cplx(c.re, 0.5 * (c.lo + c.hi)));
        // keep a healthy distance where possible; fall back to midpoint
        double pref = std::min(0.1 * Q, 0.25 * (c.hi - c.lo));
        double lo = (c.lo > -1e299) ? c.lo + pref : -1e300;
        double hi = (c.hi < 1e299) ? c.hi - pref : 1e300;
        if (lo > hi) return 0.5 * (c.lo + c.hi);
        return std::min(std::max(h, lo), hi);
    };

    if (tail.left_floor > tail.left_cap || tail.right_floor > tail.right_cap)
        throw domain_error("auto_contour: tail decay conditions admit no height");
    const double hL =
        std::max(tail.left_floor, std::min(tail.preferred, tail.left_cap));
    const double hR =
        std::max(tail.right_floor, std::min(tail.preferred, tail.right_cap));

    ContourSpec spec;
    spec.waypoints.push_back(cplx(-X, hL));
    for (const auto& c : cols) {
        // tails must also clear this column if it sits outside [-X, X]
        spec.waypoints.push_back(cplx(c.re, clampH(tail.preferred, c)));
    }
    spec.waypoints.push_back(cplx(X, hR));
    // enforce monotone Re ordering (columns may coincide with +-X)
    std::sort(spec.waypoints.begin(), spec.waypoints.end(),
              [](cplx a, cplx b) { return a.real() < b.real(); });

    // validate: every ray base strictly on the correct side
    for (const auto& p : up)
        if (p.base.imag() < spec.height_at(p.base.real()) + margin * 0.999)
            throw pinch_error("auto_contour: validation failed near up ray",
                              p.base);
    for (const auto& p : down)
        if (p.base.imag() > spec.height_at(p.base.real()) - margin * 0.999)
            throw pinch_error("auto_contour: validation failed near down ray",
                              p.base);
    return spec;
}

struct ContourIntegral {
    cplx value{0.0, 0.0};
    double err_est = 0.0;
    std::size_t evals = 0;
    std::vector<std::string> warnings;
};

namespace detail {

// One linear segment a -> b with oscillation-aware pre-splitting.
template <class F>
inline QuadResult integrate_segment(F&& f, cplx a, cplx b, double tol,
                                    double phase_quad, int max_depth,
                                    double noise = 0.0, double lin_freq = 0.0,
                                    double rel_noise = 1e-13) {
    const cplx d = b - a;
    auto g = [&](double s) { return f(a + s * d) * d; };
    const double t0 = std::fabs(a.real()), t1 = std::fabs(b.real());
    const double freq = std::max(
        1.0, lin_freq + phase_quad * pi * 2.0 * std::max(t0, t1));
    int n_panels =
        std::max(1, static_cast<int>(std::abs(d) * freq / (2.0 * pi) * 1.5) + 1);
    n_panels = std::min(n_panels, 4096);
    QuadResult total;
    for (int k = 0; k < n_panels; ++k) {
        QuadResult r = integrate_adaptive(g, static_cast<double>(k) / n_panels,
                                          static_cast<double>(k + 1) / n_panels,
                                          tol / n_panels, max_depth,
                                          noise * std::abs(d), rel_noise);
        total.value += r.value;
        total.err += r.err;
        total.evals += r.evals;
    }
    return total;
}

} // namespace detail

// Integrate f along a horizontal half-line from `start` towards dir*infinity,
// extending segment by segment until `tail_stop` consecutive segments are
// negligible. Same convergence guards as the tails of integrate_contour.
template <class F>
inline ContourIntegral integrate_ray(F&& f, cplx start, int dir,
                                     double phase_quad,
                                     const QuadratureConfig& cfg = {},
                                     double noise = 0.0,
                                     double lin_freq = 0.0,
                                     double rel_noise = 1e-13) {
    ContourIntegral out;
    cplx edge = start;
    int quiet = 0;
    double prev_mag = 1e300;
    // The integrand may carry an absolute evaluation-noise level (cancellation
    // in counterterm differences); segments below it count as negligible.
    const double seg_floor =
        std::max(cfg.abs_tol / 10, noise * cfg.tail_seg);
    while (quiet < cfg.tail_stop) {
        if (std::fabs(edge.real()) > cfg.max_reach) {
            out.warnings.push_back(
                "ray did not converge before max_reach; result suspect");
            out.err_est += (prev_mag < 1e299) ? prev_mag : 1.0;
            break;
        }
        cplx next = edge + cplx(dir * cfg.tail_seg, 0.0);
        QuadResult r = (dir > 0)
                           ? detail::integrate_segment(f, edge, next,
                                                       cfg.abs_tol / 10,
                                                       phase_quad,
                                                       cfg.max_depth, noise,
                                                       lin_freq, rel_noise)
                           : detail::integrate_segment(f, next, edge,
                                                       cfg.abs_tol / 10,
                                                       phase_quad,
                                                       cfg.max_depth, noise,
                                                       lin_freq, rel_noise);
        out.value += r.value; // segments always traversed left to right
        out.err_est += r.err;
        out.evals += r.evals;
        double mag = std::abs(r.value);
        if (mag > 4.0 * prev_mag && mag > 10.0 * seg_floor) {
            out.warnings.push_back(
                "ray contributions increasing; integrand may not decay");
            out.err_est += mag;
            break;
        }
        prev_mag = std::max(mag, 1e-300);
        quiet = (mag < seg_floor) ? quiet + 1 : 0;
        edge = next;
    }
    return out;
}

// Integrate f along the contour. Interior panels are pre-split according to
// the quadratic-phase hint (frequency grows linearly in |Re x|), then refined
// adaptively; tails are extended segment by segment until `tail_stop`
// consecutive segments contribute less than abs_tol / 10.
template <class F>
inline ContourIntegral integrate_contour(F&& f, const ContourSpec& spec,
                                         const QuadratureConfig& cfg = {}) {
    ContourIntegral out;
    if (spec.waypoints.size() < 2)
        throw domain_error("integrate_contour: contour needs >= 2 waypoints");

    auto segment = [&](cplx a, cplx b, double tol) {
        // linear parametrization x = a + s (b - a), s in [0, 1]
        const cplx d = b - a;
        auto g = [&](double s) { return f(a + s * d) * d; };
        // initial split guided by the local oscillation frequency
        const double t0 = std::fabs(a.real()), t1 = std::fabs(b.real());
        const double freq =
            std::max(1.0, spec.linear_freq +
                              spec.phase_quad * pi * 2.0 * std::max(t0, t1));
        int n_panels = std::max(
            1, static_cast<int>(std::abs(d) * freq / (2.0 * pi) * 1.5) + 1);
        n_panels = std::min(n_panels, 4096);
        QuadResult total;
        for (int k = 0; k < n_panels; ++k) {
            QuadResult r = integrate_adaptive(
                g, static_cast<double>(k) / n_panels,
                static_cast<double>(k + 1) / n_panels, tol / n_panels,
                cfg.max_depth, 0.0, spec.rel_noise);
            total.value += r.value;
            total.err += r.err;
            total.evals += r.evals;
        }
        return total;
    };

    const auto& wp = spec.waypoints;
    const double interior_tol = cfg.abs_tol / static_cast<double>(wp.size());
    for (std::size_t k = 0; k + 1 < wp.size(); ++k) {
        QuadResult r = segment(wp[k], wp[k + 1], interior_tol);
        out.value += r.value;
        out.err_est += r.err;
        out.evals += r.evals;
    }

    // horizontal tail extension in both directions
    for (int dir : {+1, -1}) {
        cplx edge = (dir > 0) ? wp.back() : wp.front();
        int quiet = 0;
        double prev_mag = 1e300;
        while (quiet < cfg.tail_stop) {
            if (std::fabs(edge.real()) > cfg.max_reach) {
                out.warnings.push_back(
                    "tail did not converge before max_reach; result suspect");
                out.err_est += prev_mag;
                break;
            }
            cplx next = edge + cplx(dir * cfg.tail_seg, 0.0);
            QuadResult r = (dir > 0) ? segment(edge, next, cfg.abs_tol / 10)
                                     : segment(next, edge, cfg.abs_tol / 10);
            out.value += r.value;
            out.err_est += r.err;
            out.evals += r.evals;
            double mag = std::abs(r.value);
            if (mag > 4.0 * prev_mag && mag > cfg.abs_tol) {
                out.warnings.push_back(
                    "tail contributions increasing; integrand may not decay");
                out.err_est += mag;
                break;
            }
            prev_mag = std::max(mag, 1e-300);
            quiet = (mag < cfg.abs_tol / 10) ? quiet + 1 : 0;
            edge = next;
        }
    }
    return out;
}

} // namespace hypgeo

#endif
