#pragma once

// Sampling refuters for co-ordinated convexity and the classes K^{alpha,s}_{m,1},
// K^{alpha,s}_{m,2}. A report of no-violation-found is evidence, never a proof.

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "hhc/error.hpp"
#include "hhc/random.hpp"
#include "hhc/surfaces.hpp"
#include "hhc/types.hpp"

namespace hhc {

struct SamplingPlan {
    int grid_per_axis = 9;
    int random_trials = 10000;
    std::uint64_t seed = 42;
    double tolerance = 1e-9;

    /// Nodes per axis of the (lambda, mu) grid.
    int weight_grid() const noexcept { return 2 * (grid_per_axis - 1) + 1; }

    void validate() const {
        if (grid_per_axis < 2) throw ParameterError("grid_per_axis must be >= 2");
        if (random_trials < 0) throw ParameterError("random_trials must be >= 0");
        if (!(tolerance >= 0.0)) throw ParameterError("tolerance must be >= 0");
    }
};

enum class Verdict { no_violation_found, violated };

inline std::string_view to_string(Verdict v) {
    return v == Verdict::violated ? "violated" : "no-violation-found";
}

/// (x, y, z, w, lambda, mu)
using Witness = std::array<double, 6>;

struct MembershipReport {
    Verdict verdict = Verdict::no_violation_found;
    double worst_margin = 0.0;  // most negative RHS - LHS observed
    Witness witness{};
    double lhs = 0.0;  // at the witness
    double rhs = 0.0;
    long samples_checked = 0;
};

enum class ConvexityClass { coordinated, first_sense, second_sense };

inline std::string_view to_string(ConvexityClass c) {
    switch (c) {
        case ConvexityClass::coordinated: return "def1";
        case ConvexityClass::first_sense: return "k1";
        case ConvexityClass::second_sense: return "k2";
    }
    return "?";
}

struct MarginTerms {
    double lhs;
    double rhs;
    double margin() const noexcept { return rhs - lhs; }
};

/// 0^0 = 1, which std::pow already guarantees.
inline double weight_pow(double base, double exponent) { return std::pow(base, exponent); }

/// LHS and RHS of the class inequality at one sample. `p` is ignored for `coordinated`.
inline MarginTerms class_terms(const Surface& g, ConvexityClass cls, const GenParams& p,
                               const Witness& w) {
    const auto [x, y, z, ww, lam, mu] = w;
    auto f = [&](double px, double py) { return g.f_unchecked(px, py); };
    const double lhs = f(lam * x + (1.0 - lam) * z, mu * y + (1.0 - mu) * ww);
    switch (cls) {
        case ConvexityClass::coordinated: {
            const double rhs = lam * mu * f(x, y) + mu * (1.0 - lam) * f(z, y) +
                               lam * (1.0 - mu) * f(x, ww) + (1.0 - lam) * (1.0 - mu) * f(z, ww);
            return {lhs, rhs};
        }
        case ConvexityClass::first_sense:
        case ConvexityClass::second_sense: {
            const double lt = weight_pow(lam, p.theta1());
            const double mt = weight_pow(mu, p.theta2());
            double lc;  // weight carried by the z/m1 column
            double mc;  // weight carried by the w/m2 row
            if (cls == ConvexityClass::first_sense) {
                lc = 1.0 - lt;
                mc = 1.0 - mt;
            } else {
                lc = weight_pow(1.0 - weight_pow(lam, p.alpha1), p.s1);
                mc = weight_pow(1.0 - weight_pow(mu, p.alpha2), p.s2);
            }
            const double zs = z / p.m1;
            const double ws = ww / p.m2;
            const double rhs = lt * mt * f(x, y) + p.m2 * lt * mc * f(x, ws) +
                               p.m1 * mt * lc * f(zs, y) + p.m1 * p.m2 * lc * mc * f(zs, ws);
            return {lhs, rhs};
        }
    }
    return {lhs, lhs};
}

namespace detail {

inline bool lex_less(const Witness& a, const Witness& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
    }
    return false;
}

inline MembershipReport run_refuter(const Surface& g, const Rect& r, ConvexityClass cls,
                                    const GenParams& p, const SamplingPlan& plan) {
    r.validate();
    plan.validate();
    if (cls != ConvexityClass::coordinated) {
        p.validate();
        require_hull_inside(g, sampling_hull(r, p));
    } else {
        require_hull_inside(g, r, "rectangle corner");
    }

    MembershipReport rep;
    bool first = true;
    auto visit = [&](const Witness& w) {
        const MarginTerms t = class_terms(g, cls, p, w);
        const double m = t.margin();
        if (!std::isfinite(m)) {
            throw NonFiniteError("class inequality is not finite on surface '" + g.name() + "'");
        }
        ++rep.samples_checked;
        if (first || m < rep.worst_margin || (m == rep.worst_margin && lex_less(w, rep.witness))) {
            first = false;
            rep.worst_margin = m;
            rep.witness = w;
            rep.lhs = t.lhs;
            rep.rhs = t.rhs;
        }
    };

    const int g_axis = plan.grid_per_axis;
    const int n_weight = plan.weight_grid();
    auto node = [](double lo, double hi, int i, int n) {
        return i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
    };

    // Point pairs: the four corner pairings first, then pairs of random grid nodes.
    std::vector<std::array<double, 4>> pairs{{r.a, r.c, r.b, r.d},
                                             {r.b, r.d, r.a, r.c},
                                             {r.a, r.d, r.b, r.c},
                                             {r.b, r.c, r.a, r.d}};
    Rng rng(plan.seed);
    const std::size_t n_pairs = static_cast<std::size_t>(g_axis) * g_axis;
    while (pairs.size() < n_pairs) {
        auto gx = [&] { return node(r.a, r.b, static_cast<int>(rng.below(g_axis)), g_axis); };
        auto gy = [&] { return node(r.c, r.d, static_cast<int>(rng.below(g_axis)), g_axis); };
        const double x = gx(), y = gy(), z = gx(), w = gy();
        pairs.push_back({x, y, z, w});
    }
    pairs.resize(n_pairs);

    for (const auto& pr : pairs)
        for (int i = 0; i < n_weight; ++i)
            for (int j = 0; j < n_weight; ++j)
                visit({pr[0], pr[1], pr[2], pr[3], node(0.0, 1.0, i, n_weight),
                       node(0.0, 1.0, j, n_weight)});

    for (int t = 0; t < plan.random_trials; ++t) {
        const double x = rng.uniform(r.a, r.b);
        const double y = rng.uniform(r.c, r.d);
        const double z = rng.uniform(r.a, r.b);
        const double w = rng.uniform(r.c, r.d);
        const double lam = rng.uniform();
        const double mu = rng.uniform();
        visit({x, y, z, w, lam, mu});
    }

    rep.verdict = rep.worst_margin < -plan.tolerance ? Verdict::violated : Verdict::no_violation_found;
    return rep;
}

}  // namespace detail

/// f(a u + (1-a) v, b phi + (1-b) psi) <= bilinear blend of the four corner values.
inline MembershipReport check_def1_coordinated(const Surface& s, const Rect& r,
                                               const SamplingPlan& plan = {}) {
    return detail::run_refuter(s, r, ConvexityClass::coordinated, GenParams::classical(), plan);
}

inline MembershipReport check_class_first(const Surface& g, const Rect& r, const GenParams& p,
                                          const SamplingPlan& plan = {}) {
    return detail::run_refuter(g, r, ConvexityClass::first_sense, p, plan);
}

inline MembershipReport check_class_second(const Surface& g, const Rect& r, const GenParams& p,
                                           const SamplingPlan& plan = {}) {
    return detail::run_refuter(g, r, ConvexityClass::second_sense, p, plan);
}

}  // namespace hhc
