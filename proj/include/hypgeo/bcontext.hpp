#ifndef HYPGEO_BCONTEXT_HPP
#define HYPGEO_BCONTEXT_HPP

// Modular parameter context: everything in the library is parametrized by a
// single real b > 0 through Q = b + 1/b and q = e^{2 i pi b^2}.

#include <cmath>

#include "common.hpp"

namespace hypgeo {

struct BContext {
    double b;

    explicit BContext(double b_) : b(b_) {
        if (!(b > 0.0) || !std::isfinite(b))
            throw domain_error("BContext: b must be a positive finite real");
    }

    double Q() const { return b + 1.0 / b; }
    double binv() const { return 1.0 / b; }
    double bmax() const { return b > 1.0 ? b : 1.0 / b; }
    double bmin() const { return b < 1.0 ? b : 1.0 / b; }

    // unit-circle deformation parameter of the associated q-polynomials
    cplx q() const { return std::exp(cplx(0.0, 2.0 * pi * b * b)); }

    // Distance of q to the nearest root of unity of order <= max_order.
    // Numerical surrogate for the "b^2 irrational" assumptions.
    double root_of_unity_distance(int max_order = 12) const {
        double x = b * b; // q = e^{2 i pi x}; roots of unity <-> x = p/k
        double best = 1e300;
        for (int k = 1; k <= max_order; ++k) {
            double frac = x * k - std::floor(x * k + 0.5);
            double d = std::fabs(frac) / k;
            if (d < best) best = d;
        }
        return best;
    }
};

} // namespace hypgeo

#endif
