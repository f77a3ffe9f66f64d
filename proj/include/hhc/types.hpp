#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "hhc/error.hpp"

namespace hhc {

/// The rectangle [a,b] x [c,d].
struct Rect {
    double a = 0.0;
    double b = 1.0;
    double c = 0.0;
    double d = 1.0;

    bool valid() const noexcept {
        return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d) &&
               a < b && c < d;
    }
    void validate() const {
        if (!valid()) {
            std::ostringstream os;
            os << "invalid rectangle [" << a << "," << b << "]x[" << c << "," << d
               << "]: need a < b and c < d";
            throw ParameterError(os.str());
        }
    }
    bool contains(double x, double y) const noexcept {
        return x >= a && x <= b && y >= c && y <= d;
    }
    bool contains(const Rect& r) const noexcept {
        return r.a >= a && r.b <= b && r.c >= c && r.d <= d;
    }
    double width() const noexcept { return b - a; }
    double height() const noexcept { return d - c; }
    double area() const noexcept { return (b - a) * (d - c); }

    friend bool operator==(const Rect&, const Rect&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Rect& r) {
    return os << "[" << r.a << "," << r.b << "]x[" << r.c << "," << r.d << "]";
}

/// Parameters of the class K^{alpha,s}_{m,*}: (s1, s2, alpha1, alpha2, m1, m2) and the exponent q.
struct GenParams {
    double s1 = 1.0;
    double s2 = 1.0;
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double m1 = 1.0;
    double m2 = 1.0;
    double q = 1.0;

    static GenParams classical(double q = 1.0) { return GenParams{1, 1, 1, 1, 1, 1, q}; }

    /// alpha1 * s1, the exponent on lambda.
    double theta1() const noexcept { return alpha1 * s1; }
    /// alpha2 * s2, the exponent on mu.
    double theta2() const noexcept { return alpha2 * s2; }

    /// Hoelder conjugate p = q/(q-1); infinite at q = 1.
    double conjugate() const noexcept {
        return q > 1.0 ? q / (q - 1.0) : std::numeric_limits<double>::infinity();
    }

    void validate() const {
        auto in = [](double v, double lo, double hi, bool open_lo) {
            return std::isfinite(v) && (open_lo ? v > lo : v >= lo) && v <= hi;
        };
        std::string bad;
        if (!in(s1, 0.0, 1.0, true)) bad = "s1 must lie in (0,1]";
        else if (!in(s2, 0.0, 1.0, true)) bad = "s2 must lie in (0,1]";
        else if (!in(alpha1, 0.0, 1.0, false)) bad = "alpha1 must lie in [0,1]";
        else if (!in(alpha2, 0.0, 1.0, false)) bad = "alpha2 must lie in [0,1]";
        else if (!in(m1, 0.0, 1.0, true)) bad = "m1 must lie in (0,1]";
        else if (!in(m2, 0.0, 1.0, true)) bad = "m2 must lie in (0,1]";
        else if (!(std::isfinite(q) && q >= 1.0)) bad = "q must be >= 1";
        if (!bad.empty()) throw ParameterError(bad);
    }

    friend bool operator==(const GenParams&, const GenParams&) = default;
    friend auto operator<=>(const GenParams&, const GenParams&) = default;
};

struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-12;
    int max_depth = 20;
};

}  // namespace hhc
