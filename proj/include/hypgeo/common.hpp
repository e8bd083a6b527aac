#ifndef HYPGEO_COMMON_HPP
#define HYPGEO_COMMON_HPP

// Shared basic types, constants, formatting and error categories used
// throughout the library.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hypgeo {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr cplx iu{0.0, 1.0};

// Thrown when an input violates a documented precondition (CLI exit code 2).
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a computation cannot reach the requested accuracy or a contour
// cannot be constructed (CLI exit code 1).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pinch: an up- and a down-sequence pole collide so no separating contour
// exists. Callers evaluating at a discretization lattice should switch to the
// residue-corrected evaluation.
struct pinch_error : numerical_error {
    cplx where;
    explicit pinch_error(const std::string& msg, cplx w)
        : numerical_error(msg), where(w) {}
};

inline std::string format_real(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// "a+bi" / "a-bi" / "a" / "bi" literals, also plain scientific notation.
inline cplx parse_complex(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw domain_error("empty complex literal");
    if (t.back() == 'i' || t.back() == 'I') {
        t.pop_back();
        if (t.empty() || t == "+") return cplx(0, 1);
        if (t == "-") return cplx(0, -1);
        // split into real and imaginary parts at the last +/- that is not an
        // exponent sign
        std::size_t split = std::string::npos;
        for (std::size_t k = t.size() - 1; k > 0; --k) {
            char c = t[k];
            if ((c == '+' || c == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
                split = k;
                break;
            }
        }
        try {
            if (split == std::string::npos) return cplx(0, std::stod(t));
            double im = (split + 1 == t.size() && t[split] == '+')   ? 1.0
                        : (split + 1 == t.size() && t[split] == '-') ? -1.0
                        : std::stod(t.substr(split));
            return cplx(std::stod(t.substr(0, split)), im);
        } catch (const std::exception&) {
            throw domain_error("unparsable complex literal: " + s);
        }
    }
    try {
        std::size_t pos = 0;
        double re = std::stod(t, &pos);
        if (pos != t.size()) throw domain_error("unparsable complex literal: " + s);
        return cplx(re, 0);
    } catch (const domain_error&) {
        throw;
    } catch (const std::exception&) {
        throw domain_error("unparsable complex literal: " + s);
    }
}

inline std::string format_complex(cplx z) {
    std::string s = format_real(z.real());
    s += (z.imag() < 0 || std::signbit(z.imag())) ? "-" : "+";
    s += format_real(std::abs(z.imag()));
    s += "i";
    return s;
}

// Accurate complex log(1 + w) and exp(z) - 1 for small arguments.
inline cplx clog1p(cplx w) {
    if (std::abs(w) < 1e-4)
        return w * (1.0 - w * (0.5 - w * (1.0 / 3.0 - w / 4.0)));
    return std::log(1.0 + w);
}

inline cplx cexpm1(cplx z) {
    if (std::abs(z) < 1e-4)
        return z * (1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0)));
    return std::exp(z) - 1.0;
}

// Number of worker threads for embarrassingly parallel verification batches.
inline int thread_count() {
    if (const char* env = std::getenv("HYPGEO_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

} // namespace hypgeo

#endif
