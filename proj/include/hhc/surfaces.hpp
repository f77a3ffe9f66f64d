#pragma once

// Test functions on a rectangle together with their mixed second partial.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hhc/error.hpp"
#include "hhc/oracle.hpp"
#include "hhc/random.hpp"
#include "hhc/types.hpp"

namespace hhc {

using Fn2 = std::function<double(double, double)>;

enum class MixedPartialKind { analytic, finite_difference };

inline std::string_view to_string(MixedPartialKind k) {
    return k == MixedPartialKind::analytic ? "analytic" : "finite-difference";
}

/// Immutable. `domain` is where f may be evaluated; it is usually larger than the working
/// rectangle so that m-scaled corners such as b/m1 are legal evaluation points.
class Surface {
public:
    Surface(std::string name, Rect domain, Fn2 f, Fn2 d2f, std::string formula = {})
        : name_(std::move(name)), formula_(std::move(formula)), domain_(domain), f_(std::move(f)),
          d2f_(std::move(d2f)), kind_(MixedPartialKind::analytic) {
        domain_.validate();
    }

    /// Mixed partial by the 4-point cross difference.
    static Surface finite_difference(std::string name, Rect domain, Fn2 f, std::string formula = {}) {
        Surface s(std::move(name), domain, std::move(f), nullptr, std::move(formula));
        s.kind_ = MixedPartialKind::finite_difference;
        return s;
    }

    /// Polynomial surface; the exact form is kept for the oracle.
    static Surface from_polynomial(std::string name, const oracle::RationalPoly2& p, Rect domain) {
        auto exact = std::make_shared<const oracle::RationalPoly2>(p);
        auto f = double_poly(p);
        auto d2f = double_poly(oracle::poly_mixed_partial(p));
        Surface s(std::move(name), domain, std::move(f), std::move(d2f), p.to_string());
        s.poly_ = std::move(exact);
        return s;
    }

    const std::string& name() const noexcept { return name_; }
    const std::string& formula() const noexcept { return formula_; }
    const Rect& domain() const noexcept { return domain_; }
    MixedPartialKind kind() const noexcept { return kind_; }
    /// Exact polynomial form, or nullptr.
    const oracle::RationalPoly2* polynomial() const noexcept { return poly_.get(); }

    /// f without the domain check; callers have verified containment of the whole region.
    double f_unchecked(double x, double y) const { return f_(x, y); }
    double d2f_analytic_unchecked(double x, double y) const { return d2f_(x, y); }

private:
    static Fn2 double_poly(const oracle::RationalPoly2& p) {
        struct T {
            int i, j;
            double c;
        };
        std::vector<T> terms;
        for (const auto& [k, c] : p.terms()) terms.push_back({k.first, k.second, oracle::to_double(c)});
        return [terms = std::move(terms)](double x, double y) {
            double acc = 0.0;
            for (const auto& t : terms) {
                double v = t.c;
                for (int n = 0; n < t.i; ++n) v *= x;
                for (int n = 0; n < t.j; ++n) v *= y;
                acc += v;
            }
            return acc;
        };
    }

    std::string name_;
    std::string formula_;
    Rect domain_;
    Fn2 f_;
    Fn2 d2f_;
    MixedPartialKind kind_;
    std::shared_ptr<const oracle::RationalPoly2> poly_;
};

namespace detail {

inline void require_in_domain(const Surface& s, double x, double y, std::string_view what) {
    if (!s.domain().contains(x, y)) {
        std::ostringstream os;
        os.precision(17);
        os << what << " (" << x << ", " << y << ") lies outside the domain " << s.domain()
           << " of surface '" << s.name() << "'";
        throw DomainError(os.str(), x, y);
    }
}

inline double require_finite(const Surface& s, double v, double x, double y, std::string_view what) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << what << " of surface '" << s.name() << "' is not finite at (" << x << ", " << y << ")";
        throw NonFiniteError(os.str());
    }
    return v;
}

}  // namespace detail

inline double eval_surface(const Surface& s, double x, double y) {
    detail::require_in_domain(s, x, y, "point");
    return detail::require_finite(s, s.f_unchecked(x, y), x, y, "f");
}

/// Step used by the cross difference: eps^{1/4} scaled by coordinate magnitude.
inline double fd_step(double coord) {
    static const double base = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
    return base * (1.0 + std::abs(coord));
}

/// (f(x+h,y+k) - f(x+h,y-k) - f(x-h,y+k) + f(x-h,y-k)) / (4hk)
inline double cross_difference(const Surface& s, double x, double y) {
    const double h = fd_step(x);
    const double k = fd_step(y);
    const double xs[2] = {x - h, x + h};
    const double ys[2] = {y - k, y + k};
    for (double px : xs)
        for (double py : ys) detail::require_in_domain(s, px, py, "finite-difference stencil point");
    auto f = [&](double px, double py) {
        return detail::require_finite(s, s.f_unchecked(px, py), px, py, "f");
    };
    return (f(xs[1], ys[1]) - f(xs[1], ys[0]) - f(xs[0], ys[1]) + f(xs[0], ys[0])) / (4.0 * h * k);
}

inline double eval_mixed_partial(const Surface& s, double x, double y) {
    detail::require_in_domain(s, x, y, "point");
    if (s.kind() == MixedPartialKind::finite_difference) return cross_difference(s, x, y);
    return detail::require_finite(s, s.d2f_analytic_unchecked(x, y), x, y, "mixed partial");
}

/// Largest |FD - analytic| / (1 + |analytic|) over `points` uniform draws in `region`.
/// Zero for finite-difference surfaces (nothing to compare against).
inline double mixed_partial_crosscheck(const Surface& s, const Rect& region, int points,
                                       std::uint64_t seed) {
    if (s.kind() != MixedPartialKind::analytic) return 0.0;
    Rng rng(seed);
    double worst = 0.0;
    for (int n = 0; n < points; ++n) {
        const double x = rng.uniform(region.a, region.b);
        const double y = rng.uniform(region.c, region.d);
        const double an = eval_mixed_partial(s, x, y);
        const double fd = cross_difference(s, x, y);
        worst = std::max(worst, std::abs(fd - an) / (1.0 + std::abs(an)));
    }
    return worst;
}

/// Smallest rectangle containing {a, b, b/m1} x {c, d, d/m2}: every point the bounds evaluate.
inline Rect required_hull(const Rect& r, const GenParams& p) {
    r.validate();
    p.validate();
    const double bx = r.b / p.m1;
    const double dy = r.d / p.m2;
    return Rect{std::min({r.a, r.b, bx}), std::max({r.a, r.b, bx}), std::min({r.c, r.d, dy}),
                std::max({r.c, r.d, dy})};
}

/// Hull of every scaled point z/m1, w/m2 with z in [a,b], w in [c,d], together with r itself.
/// Equals required_hull when a, c >= 0.
inline Rect sampling_hull(const Rect& r, const GenParams& p) {
    r.validate();
    p.validate();
    const double ax = r.a / p.m1, bx = r.b / p.m1;
    const double cy = r.c / p.m2, dy = r.d / p.m2;
    return Rect{std::min({r.a, ax}), std::max({r.b, bx}), std::min({r.c, cy}), std::max({r.d, dy})};
}

/// Throws DomainError naming the first corner of `hull` outside the surface's domain.
inline void require_hull_inside(const Surface& s, const Rect& hull, std::string_view what = "scaled corner") {
    const double corners[4][2] = {{hull.a, hull.c}, {hull.a, hull.d}, {hull.b, hull.c}, {hull.b, hull.d}};
    for (const auto& c : corners) detail::require_in_domain(s, c[0], c[1], what);
}

/// The surface (x,y) -> |d2f(x,y)|^q, the function the generalized bounds assume convex.
inline Surface abs_mixed_partial_power(const Surface& s, double q) {
    auto base = std::make_shared<const Surface>(s);
    Fn2 g = [base, q](double x, double y) {
        const double v = std::abs(eval_mixed_partial(*base, x, y));
        return q == 1.0 ? v : std::pow(v, q);
    };
    std::ostringstream name;
    name << "|d2f(" << s.name() << ")|^" << q;
    return Surface::finite_difference(name.str(), s.domain(), std::move(g));
}

// ---------------------------------------------------------------------------
// Corpus

/// Evaluation domain shared by the corpus; wide enough for m down to 1/8 on [0,1]^2.
inline constexpr Rect kCorpusDomain{-8.0, 8.0, -8.0, 8.0};

inline const std::vector<Surface>& corpus() {
    static const std::vector<Surface> surfaces = [] {
        using oracle::RationalPoly2;
        std::vector<Surface> v;
        const Rect dom = kCorpusDomain;
        v.push_back(Surface::from_polynomial("xy", RationalPoly2{{1, 1, 1}}, dom));
        v.push_back(Surface::from_polynomial("4xy", RationalPoly2{{1, 1, 4}}, dom));
        v.push_back(Surface::from_polynomial("x2y2", RationalPoly2{{2, 2, 1}}, dom));
        v.push_back(Surface::from_polynomial("x3y3", RationalPoly2{{3, 3, 1}}, dom));
        v.push_back(Surface("exp_x_plus_y", dom, [](double x, double y) { return std::exp(x + y); },
                            [](double x, double y) { return std::exp(x + y); }, "exp(x+y)"));
        v.push_back(Surface::from_polynomial(
            "x_plus_y_sq", RationalPoly2{{2, 0, 1}, {1, 1, 2}, {0, 2, 1}}, dom));
        v.push_back(Surface::from_polynomial("const5", RationalPoly2{{0, 0, 5}}, dom));
        v.push_back(Surface::from_polynomial("one", RationalPoly2{{0, 0, 1}}, dom));
        v.push_back(Surface::from_polynomial("neg_x2_y2", RationalPoly2{{2, 0, -1}, {0, 2, -1}}, dom));
        return v;
    }();
    return surfaces;
}

inline const Surface* find_surface(std::string_view name) {
    for (const auto& s : corpus())
        if (s.name() == name) return &s;
    return nullptr;
}

inline const Surface& corpus_surface(std::string_view name) {
    if (const Surface* s = find_surface(name)) return *s;
    throw ParameterError("unknown surface '" + std::string(name) + "'");
}

}  // namespace hhc
