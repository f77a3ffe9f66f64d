#pragma once

// Trapezoid-type deviation on the co-ordinates, its integral identity, the bound
// constants and the left/right sides of every bound, in proof-form and as-written variants.

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "hhc/error.hpp"
#include "hhc/quadrature.hpp"
#include "hhc/surfaces.hpp"
#include "hhc/types.hpp"

namespace hhc {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// integral_0^1 |1 - 2t| t^theta dt, closed form. theta = alpha1*s1 gives B, alpha2*s2 gives C.
inline double const_b(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw ParameterError("const_b: theta must lie in [0,1]");
    const double p2 = std::pow(2.0, theta);
    return 1.0 / (p2 * (theta + 1.0)) - 1.0 / (p2 * (theta + 2.0)) + 2.0 / (theta + 2.0) -
           1.0 / (theta + 1.0);
}

struct DeviationTerms {
    double corner_avg = 0.0;
    double integral_mean = 0.0;
    double marginal_a = 0.0;
    double signed_deviation = 0.0;
    double abs_deviation = 0.0;
    double error_budget = 0.0;
};

inline DeviationTerms deviation_terms(const Surface& s, const Rect& r, const Tolerance& tol = {}) {
    r.validate();
    require_hull_inside(s, r, "rectangle corner");
    auto f = [&](double x, double y) { return s.f_unchecked(x, y); };

    DeviationTerms t;
    t.corner_avg = (eval_surface(s, r.a, r.c) + eval_surface(s, r.a, r.d) +
                    eval_surface(s, r.b, r.c) + eval_surface(s, r.b, r.d)) /
                   4.0;
    const auto area = quad::integrate_2d(f, r, tol);
    const auto fc = quad::integrate_1d([&](double x) { return f(x, r.c); }, r.a, r.b, tol);
    const auto fd = quad::integrate_1d([&](double x) { return f(x, r.d); }, r.a, r.b, tol);
    const auto fa = quad::integrate_1d([&](double y) { return f(r.a, y); }, r.c, r.d, tol);
    const auto fb = quad::integrate_1d([&](double y) { return f(r.b, y); }, r.c, r.d, tol);

    t.integral_mean = area.value / r.area();
    t.marginal_a = 0.5 * ((fc.value + fd.value) / r.width() + (fa.value + fb.value) / r.height());
    t.signed_deviation = t.corner_avg + t.integral_mean - t.marginal_a;
    t.abs_deviation = std::abs(t.signed_deviation);

    const double quad_err = area.error_estimate / r.area() +
                            0.5 * ((fc.error_estimate + fd.error_estimate) / r.width() +
                                   (fa.error_estimate + fb.error_estimate) / r.height());
    const double rounding = 16.0 * kEps *
                            (std::abs(t.corner_avg) + std::abs(t.integral_mean) + std::abs(t.marginal_a));
    t.error_budget = quad_err + rounding;
    return t;
}

/// (b-a)(d-c)/4 * integral over [0,1]^2 of (1-2l)(1-2m) d2f(l a + (1-l) b, m c + (1-m) d).
inline quad::QuadratureResult identity_rhs(const Surface& s, const Rect& r, const Tolerance& tol = {}) {
    r.validate();
    const std::array<double, 1> half{0.5};
    auto integrand = [&](double lam, double mu) {
        const double x = lam * r.a + (1.0 - lam) * r.b;
        const double y = mu * r.c + (1.0 - mu) * r.d;
        return (1.0 - 2.0 * lam) * (1.0 - 2.0 * mu) * eval_mixed_partial(s, x, y);
    };
    // Difference-quotient noise (~1e-8 relative) would stall refinement at the default target.
    Tolerance t = tol;
    if (s.kind() == MixedPartialKind::finite_difference) t.rel = std::max(t.rel, 1e-7);
    auto res = quad::integrate_2d(integrand, Rect{0.0, 1.0, 0.0, 1.0}, t, half, half);
    const double scale = r.area() / 4.0;
    res.value *= scale;
    res.error_estimate *= scale;
    return res;
}

struct Lemma1Check {
    double residual = 0.0;  // signed_deviation - identity_rhs
    double error_budget = 0.0;
    double identity_rhs = 0.0;
    DeviationTerms deviation;
};

inline Lemma1Check check_lemma1(const Surface& s, const Rect& r, const Tolerance& tol = {}) {
    Lemma1Check c;
    c.deviation = deviation_terms(s, r, tol);
    const auto rhs = identity_rhs(s, r, tol);
    c.identity_rhs = rhs.value;
    c.residual = c.deviation.signed_deviation - rhs.value;
    c.error_budget = c.deviation.error_budget + rhs.error_estimate + 16.0 * kEps * std::abs(rhs.value);
    return c;
}

// ---------------------------------------------------------------------------
// Bounds

enum class Theorem { thm2, thm3, thm4, thm5 };
enum class Variant { proof_form, as_written };
enum class BoundVerdict { holds, violated, inconclusive };

inline std::string_view to_string(Theorem t) {
    switch (t) {
        case Theorem::thm2: return "thm2";
        case Theorem::thm3: return "thm3";
        case Theorem::thm4: return "thm4";
        case Theorem::thm5: return "thm5";
    }
    return "?";
}
inline std::string_view to_string(Variant v) {
    return v == Variant::proof_form ? "proof-form" : "as-written";
}
inline std::string_view to_string(BoundVerdict v) {
    switch (v) {
        case BoundVerdict::holds: return "holds";
        case BoundVerdict::violated: return "violated";
        case BoundVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct BoundReport {
    Theorem theorem = Theorem::thm2;
    Variant variant = Variant::proof_form;
    GenParams params;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double error_budget = 0.0;
    BoundVerdict verdict = BoundVerdict::holds;
};

inline BoundVerdict classify(double slack, double error_budget, double rhs) {
    if (slack >= -error_budget) return BoundVerdict::holds;
    if (slack < -(error_budget + 1e-9 * (1.0 + std::abs(rhs)))) return BoundVerdict::violated;
    return BoundVerdict::inconclusive;
}

/// |d2f| at (a,c), (a,d/m2), (b/m1,c), (b/m1,d/m2), each with an evaluation uncertainty.
struct CornerDerivatives {
    std::array<double, 4> value{};
    std::array<double, 4> uncertainty{};
};

inline CornerDerivatives corner_derivatives(const Surface& s, const Rect& r, const GenParams& p) {
    require_hull_inside(s, required_hull(r, p));
    const double bx = r.b / p.m1;
    const double dy = r.d / p.m2;
    const double pts[4][2] = {{r.a, r.c}, {r.a, dy}, {bx, r.c}, {bx, dy}};
    const double rel = s.kind() == MixedPartialKind::analytic ? 8.0 * kEps : 1e-6;
    CornerDerivatives out;
    for (int i = 0; i < 4; ++i) {
        out.value[i] = std::abs(eval_mixed_partial(s, pts[i][0], pts[i][1]));
        out.uncertainty[i] = rel * (1.0 + out.value[i]);
    }
    return out;
}

namespace detail {

/// prefactor * (sum_i w_i |D_i|^q)^{1/q} and its budget, propagated monotonically:
/// prefactor * ((S + dS)^{1/q} - S^{1/q}) with dS the first-order change of S.
struct PowerBracket {
    double value;
    double budget;
};

inline PowerBracket power_bracket(double prefactor, const std::array<double, 4>& weights,
                                  const CornerDerivatives& d, double q) {
    double sum = 0.0;
    double dsum = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double v = d.value[i];
        sum += weights[i] * (q == 1.0 ? v : std::pow(v, q));
        const double slope = q == 1.0 ? 1.0 : q * std::pow(v + d.uncertainty[i], q - 1.0);
        dsum += std::abs(weights[i]) * slope * d.uncertainty[i];
    }
    const double root = q == 1.0 ? sum : std::pow(sum, 1.0 / q);
    const double root_hi = q == 1.0 ? sum + dsum : std::pow(sum + dsum, 1.0 / q);
    const double value = prefactor * root;
    return {value, prefactor * (root_hi - root) + 16.0 * kEps * std::abs(value)};
}

inline BoundReport finish(Theorem th, Variant var, const GenParams& p, const DeviationTerms& dev,
                          PowerBracket rhs) {
    BoundReport b;
    b.theorem = th;
    b.variant = var;
    b.params = p;
    b.lhs = dev.abs_deviation;
    b.rhs = rhs.value;
    b.slack = b.rhs - b.lhs;
    b.error_budget = dev.error_budget + rhs.budget;
    b.verdict = classify(b.slack, b.error_budget, b.rhs);
    return b;
}

}  // namespace detail

/// Convex |d2f|: (b-a)(d-c)/16 times the mean of |d2f| at the four corners.
inline BoundReport bound_thm2(const Surface& s, const Rect& r, const DeviationTerms& dev) {
    r.validate();
    const CornerDerivatives d = corner_derivatives(s, r, GenParams::classical());
    // Classical corners are (a,c), (a,d), (b,c), (b,d).
    const std::array<double, 4> w{0.25, 0.25, 0.25, 0.25};
    return detail::finish(Theorem::thm2, Variant::proof_form, GenParams::classical(), dev,
                          detail::power_bracket(r.area() / 16.0, w, d, 1.0));
}

inline BoundReport bound_thm2(const Surface& s, const Rect& r, const Tolerance& tol = {}) {
    return bound_thm2(s, r, deviation_terms(s, r, tol));
}

/// |d2f| in K^{alpha,s}_{m,1}, q = 1. Weights from B = const_b(alpha1 s1), C = const_b(alpha2 s2).
inline BoundReport bound_thm3(const Surface& s, const Rect& r, const GenParams& p, Variant variant,
                              const DeviationTerms& dev) {
    r.validate();
    p.validate();
    if (p.q != 1.0) throw ParameterError("thm3 is the q = 1 bound");
    const double B = const_b(p.theta1());
    const double C = const_b(p.theta2());
    const CornerDerivatives d = corner_derivatives(s, r, p);
    std::array<double, 4> w{};
    if (variant == Variant::proof_form) {
        w = {B * C, B * (0.5 - C) * p.m2, (0.5 - B) * C * p.m1, (0.5 - B) * (0.5 - C) * p.m1 * p.m2};
    } else {
        // BC {(a,c) + m1 (b/m1,c)} + (1/2-B)(1/2-C) {m2 (a,d/m2) + m1 m2 (b/m1,d/m2)}
        const double g2 = (0.5 - B) * (0.5 - C);
        w = {B * C, g2 * p.m2, B * C * p.m1, g2 * p.m1 * p.m2};
    }
    return detail::finish(Theorem::thm3, variant, p, dev,
                          detail::power_bracket(r.area() / 4.0, w, d, 1.0));
}

inline BoundReport bound_thm3(const Surface& s, const Rect& r, const GenParams& p,
                              Variant variant = Variant::proof_form, const Tolerance& tol = {}) {
    return bound_thm3(s, r, p, variant, deviation_terms(s, r, tol));
}

/// The weighted corner sum S of the Hoelder bound (without the (theta+1) factors).
inline std::array<double, 4> thm4_weights(const GenParams& p) {
    return {1.0, p.m2 * p.theta2(), p.m1 * p.theta1(), p.m1 * p.m2 * p.theta1() * p.theta2()};
}

/// |d2f|^q in K^{alpha,s}_{m,1}, q > 1, Hoelder route.
inline BoundReport bound_thm4(const Surface& s, const Rect& r, const GenParams& p, Variant variant,
                              const DeviationTerms& dev) {
    r.validate();
    p.validate();
    if (!(p.q > 1.0)) throw ParameterError("thm4 needs q > 1");
    const double pc = p.conjugate();
    const double theta_factor = (p.theta1() + 1.0) * (p.theta2() + 1.0);
    const CornerDerivatives d = corner_derivatives(s, r, p);
    std::array<double, 4> w = thm4_weights(p);
    double prefactor = r.area() / (4.0 * std::pow(pc + 1.0, 2.0 / pc));
    if (variant == Variant::proof_form) {
        for (double& wi : w) wi /= theta_factor;  // inside the q-th root
    } else {
        prefactor /= theta_factor;  // outside the q-th root
    }
    return detail::finish(Theorem::thm4, variant, p, dev, detail::power_bracket(prefactor, w, d, p.q));
}

inline BoundReport bound_thm4(const Surface& s, const Rect& r, const GenParams& p,
                              Variant variant = Variant::proof_form, const Tolerance& tol = {}) {
    return bound_thm4(s, r, p, variant, deviation_terms(s, r, tol));
}

/// |d2f|^q in K^{alpha,s}_{m,1}, q >= 1, power-mean route.
inline BoundReport bound_thm5(const Surface& s, const Rect& r, const GenParams& p, Variant variant,
                              const DeviationTerms& dev) {
    r.validate();
    p.validate();
    const double B = const_b(p.theta1());
    const double C = const_b(p.theta2());
    const CornerDerivatives d = corner_derivatives(s, r, p);
    std::array<double, 4> w{};
    if (variant == Variant::proof_form) {
        w = {B * C, B * (0.5 - C) * p.m2, (0.5 - B) * C * p.m1, (0.5 - B) * (0.5 - C) * p.m1 * p.m2};
    } else {
        const double g2 = (1.0 - B) * (1.0 - C);
        w = {B * C, g2 * p.m2, B * C * p.m1, g2 * p.m1 * p.m2};
    }
    const double prefactor = r.area() / std::pow(4.0, (2.0 * p.q - 1.0) / p.q);
    return detail::finish(Theorem::thm5, variant, p, dev, detail::power_bracket(prefactor, w, d, p.q));
}

inline BoundReport bound_thm5(const Surface& s, const Rect& r, const GenParams& p,
                              Variant variant = Variant::proof_form, const Tolerance& tol = {}) {
    return bound_thm5(s, r, p, variant, deviation_terms(s, r, tol));
}

/// Dispatch; `p.q` is forced to 1 for thm3 by callers that sweep q.
inline BoundReport evaluate_bound(Theorem th, const Surface& s, const Rect& r, const GenParams& p,
                                  Variant variant, const DeviationTerms& dev) {
    switch (th) {
        case Theorem::thm2: return bound_thm2(s, r, dev);
        case Theorem::thm3: return bound_thm3(s, r, p, variant, dev);
        case Theorem::thm4: return bound_thm4(s, r, p, variant, dev);
        case Theorem::thm5: return bound_thm5(s, r, p, variant, dev);
    }
    throw ParameterError("unknown theorem");
}

// ---------------------------------------------------------------------------
// Chains

struct ChainReport {
    std::vector<double> values;
    std::vector<double> errors;  // per-term budget
    bool monotone = true;
    double worst_gap = 0.0;  // smallest consecutive difference
};

inline ChainReport make_chain(std::vector<double> values, std::vector<double> errors) {
    ChainReport c;
    c.values = std::move(values);
    c.errors = std::move(errors);
    c.worst_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < c.values.size(); ++i) {
        const double gap = c.values[i + 1] - c.values[i];
        const double allowance = c.errors[i] + c.errors[i + 1];
        c.worst_gap = std::min(c.worst_gap, gap);
        if (gap < -allowance) c.monotone = false;
    }
    if (c.values.size() < 2) c.worst_gap = 0.0;
    return c;
}

/// f(mid) <= mean <= (f(lo) + f(hi))/2 for convex g.
template <class G>
ChainReport hh_1d_chain(G&& g, double lo, double hi, const Tolerance& tol = {}) {
    const double mid = g(0.5 * (lo + hi));
    const auto integral = quad::integrate_1d(g, lo, hi, tol);
    const double mean = integral.value / (hi - lo);
    const double ends = 0.5 * (g(lo) + g(hi));
    auto round = [](double v) { return 8.0 * kEps * std::abs(v); };
    return make_chain({mid, mean, ends},
                      {round(mid), integral.error_estimate / (hi - lo) + round(mean), round(ends)});
}

/// Centre value, mid-line means, double-integral mean, edge means, corner average.
inline ChainReport five_term_chain(const Surface& s, const Rect& r, const Tolerance& tol = {}) {
    r.validate();
    require_hull_inside(s, r, "rectangle corner");
    auto f = [&](double x, double y) { return s.f_unchecked(x, y); };
    auto round = [](double v) { return 8.0 * kEps * std::abs(v); };
    const double xm = 0.5 * (r.a + r.b);
    const double ym = 0.5 * (r.c + r.d);

    const double centre = eval_surface(s, xm, ym);

    const auto mx = quad::integrate_1d([&](double x) { return f(x, ym); }, r.a, r.b, tol);
    const auto my = quad::integrate_1d([&](double y) { return f(xm, y); }, r.c, r.d, tol);
    const double midline = 0.5 * (mx.value / r.width() + my.value / r.height());
    const double midline_err = 0.5 * (mx.error_estimate / r.width() + my.error_estimate / r.height());

    const auto area = quad::integrate_2d(f, r, tol);
    const double mean = area.value / r.area();

    const auto fc = quad::integrate_1d([&](double x) { return f(x, r.c); }, r.a, r.b, tol);
    const auto fd = quad::integrate_1d([&](double x) { return f(x, r.d); }, r.a, r.b, tol);
    const auto fa = quad::integrate_1d([&](double y) { return f(r.a, y); }, r.c, r.d, tol);
    const auto fb = quad::integrate_1d([&](double y) { return f(r.b, y); }, r.c, r.d, tol);
    const double edges = 0.25 * ((fc.value + fd.value) / r.width() + (fa.value + fb.value) / r.height());
    const double edges_err = 0.25 * ((fc.error_estimate + fd.error_estimate) / r.width() +
                                     (fa.error_estimate + fb.error_estimate) / r.height());

    const double corners = 0.25 * (eval_surface(s, r.a, r.c) + eval_surface(s, r.a, r.d) +
                                   eval_surface(s, r.b, r.c) + eval_surface(s, r.b, r.d));

    return make_chain({centre, midline, mean, edges, corners},
                      {round(centre), midline_err + round(midline),
                       area.error_estimate / r.area() + round(mean), edges_err + round(edges),
                       round(corners)});
}

}  // namespace hhc
