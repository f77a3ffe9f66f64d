#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <sstream>
#include <vector>

#include "hhc/error.hpp"
#include "hhc/types.hpp"

namespace hhc::quad {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t panels = 0;
};

namespace detail {

inline constexpr int kNodes = 10;

struct GaussLegendre {
    std::array<double, kNodes> x{};
    std::array<double, kNodes> w{};
};

// Nodes on [-1,1] by Newton iteration on P_n. Exact for degree 2n-1 = 19.
inline const GaussLegendre& gauss_legendre() {
    static const GaussLegendre rule = [] {
        GaussLegendre r;
        constexpr int n = kNodes;
        for (int i = 0; i < n; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0;
                double p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-17) break;
            }
            r.x[i] = z;
            r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        return r;
    }();
    return rule;
}

inline void require_finite(double v, double x) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "integrand is not finite at x=" << x;
        throw NonFiniteError(os.str());
    }
}
inline void require_finite(double v, double x, double y) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "integrand is not finite at (" << x << ", " << y << ")";
        throw NonFiniteError(os.str());
    }
}

struct PanelSum {
    double value;
    double abs_value;
};

template <class F>
PanelSum gl_panel(F& g, double lo, double hi) {
    const auto& rule = gauss_legendre();
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double s = 0.0;
    double sa = 0.0;
    for (int i = 0; i < kNodes; ++i) {
        const double x = mid + half * rule.x[i];
        const double v = g(x);
        require_finite(v, x);
        s += rule.w[i] * v;
        sa += rule.w[i] * std::abs(v);
    }
    return {s * half, sa * half};
}

template <class F>
PanelSum gl_cell(F& g, double x0, double x1, double y0, double y1) {
    const auto& rule = gauss_legendre();
    const double hx = 0.5 * (x1 - x0), mx = 0.5 * (x1 + x0);
    const double hy = 0.5 * (y1 - y0), my = 0.5 * (y1 + y0);
    double s = 0.0;
    double sa = 0.0;
    for (int i = 0; i < kNodes; ++i) {
        const double x = mx + hx * rule.x[i];
        double row = 0.0;
        double row_abs = 0.0;
        for (int j = 0; j < kNodes; ++j) {
            const double y = my + hy * rule.x[j];
            const double v = g(x, y);
            require_finite(v, x, y);
            row += rule.w[j] * v;
            row_abs += rule.w[j] * std::abs(v);
        }
        s += rule.w[i] * row;
        sa += rule.w[i] * row_abs;
    }
    return {s * hx * hy, sa * hx * hy};
}

inline std::vector<double> breakpoints(double lo, double hi, std::span<const double> splits) {
    std::vector<double> pts{lo};
    std::vector<double> inner(splits.begin(), splits.end());
    std::sort(inner.begin(), inner.end());
    for (double s : inner)
        if (s > pts.back() && s < hi) pts.push_back(s);
    pts.push_back(hi);
    return pts;
}

// Roundoff-limited accuracy: past this the two refinement levels cannot be separated.
inline double roundoff_floor(double abs_integral) {
    return 50.0 * std::numeric_limits<double>::epsilon() * abs_integral;
}

}  // namespace detail

/// Adaptive composite Gauss-Legendre on [lo, hi]. Each panel is integrated once whole
/// and once as two halves; the halves are kept and |halves - whole| is the panel error.
/// The panel with the largest error is bisected until the summed error meets `tol`.
/// `splits` are mandatory breakpoints (kinks).
template <class F>
QuadratureResult integrate_1d(F&& g, double lo, double hi, const Tolerance& tol = {},
                              std::span<const double> splits = {}) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw ParameterError("integrate_1d needs finite lo < hi");

    struct Panel {
        double lo, hi;
        double left, right;  // half-panel integrals
        double value, abs_value, error;
        int depth;
    };
    auto make = [&](double a, double b, double whole, int depth) {
        const double m = 0.5 * (a + b);
        const auto l = detail::gl_panel(g, a, m);
        const auto r = detail::gl_panel(g, m, b);
        const double v = l.value + r.value;
        return Panel{a, b, l.value, r.value, v, l.abs_value + r.abs_value, std::abs(v - whole),
                     depth};
    };

    std::vector<Panel> panels;
    const auto pts = detail::breakpoints(lo, hi, splits);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        panels.push_back(make(pts[i], pts[i + 1], detail::gl_panel(g, pts[i], pts[i + 1]).value, 0));

    auto worse = [&](std::size_t i, std::size_t j) {
        return panels[i].error < panels[j].error || (panels[i].error == panels[j].error && i > j);
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);
    for (std::size_t i = 0; i < panels.size(); ++i) heap.push(i);

    constexpr std::size_t kMaxPanels = std::size_t{1} << 16;
    auto totals = [&] {
        double v = 0.0, e = 0.0, a = 0.0;
        for (const auto& p : panels) {
            v += p.value;
            e += p.error;
            a += p.abs_value;
        }
        return std::array<double, 3>{v, e, a};
    };

    for (;;) {
        const auto [value, error, abs_value] = totals();
        const double target =
            std::max({tol.abs, tol.rel * std::abs(value), detail::roundoff_floor(abs_value)});
        if (error <= target) break;
        const std::size_t worst = heap.top();
        heap.pop();
        const Panel p = panels[worst];
        if (p.depth >= tol.max_depth || panels.size() >= kMaxPanels) {
            std::ostringstream os;
            os << "integrate_1d: no convergence on [" << lo << ", " << hi << "] (error " << error
               << ", target " << target << ")";
            throw ConvergenceError(os.str(), value, error);
        }
        const double m = 0.5 * (p.lo + p.hi);
        panels[worst] = make(p.lo, m, p.left, p.depth + 1);
        panels.push_back(make(m, p.hi, p.right, p.depth + 1));
        heap.push(worst);
        heap.push(panels.size() - 1);
    }

    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
    QuadratureResult out;
    for (const auto& p : panels) {
        out.value += p.value;
        out.error_estimate += p.error;
    }
    out.panels = panels.size();
    return out;
}

/// Tensor-product Gauss-Legendre on cells of r, adaptive by quadrisection of the cell with
/// the largest |four quadrants - whole cell| error. Splits are mandatory grid lines.
template <class F>
QuadratureResult integrate_2d(F&& g, const Rect& r, const Tolerance& tol = {},
                              std::span<const double> xsplits = {},
                              std::span<const double> ysplits = {}) {
    r.validate();

    struct Cell {
        double x0, x1, y0, y1;
        std::array<double, 4> quads;  // (lo,lo) (hi,lo) (lo,hi) (hi,hi)
        double value, abs_value, error;
        int depth;
    };
    auto make = [&](double x0, double x1, double y0, double y1, double whole, int depth) {
        const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
        const auto q0 = detail::gl_cell(g, x0, xm, y0, ym);
        const auto q1 = detail::gl_cell(g, xm, x1, y0, ym);
        const auto q2 = detail::gl_cell(g, x0, xm, ym, y1);
        const auto q3 = detail::gl_cell(g, xm, x1, ym, y1);
        const double v = q0.value + q1.value + q2.value + q3.value;
        return Cell{x0,
                    x1,
                    y0,
                    y1,
                    {q0.value, q1.value, q2.value, q3.value},
                    v,
                    q0.abs_value + q1.abs_value + q2.abs_value + q3.abs_value,
                    std::abs(v - whole),
                    depth};
    };

    std::vector<Cell> cells;
    const auto xs = detail::breakpoints(r.a, r.b, xsplits);
    const auto ys = detail::breakpoints(r.c, r.d, ysplits);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        for (std::size_t j = 0; j + 1 < ys.size(); ++j)
            cells.push_back(make(xs[i], xs[i + 1], ys[j], ys[j + 1],
                                 detail::gl_cell(g, xs[i], xs[i + 1], ys[j], ys[j + 1]).value, 0));

    auto worse = [&](std::size_t i, std::size_t j) {
        return cells[i].error < cells[j].error || (cells[i].error == cells[j].error && i > j);
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);
    for (std::size_t i = 0; i < cells.size(); ++i) heap.push(i);

    constexpr std::size_t kMaxCells = std::size_t{1} << 14;
    for (;;) {
        double value = 0.0, error = 0.0, abs_value = 0.0;
        for (const auto& c : cells) {
            value += c.value;
            error += c.error;
            abs_value += c.abs_value;
        }
        const double target =
            std::max({tol.abs, tol.rel * std::abs(value), detail::roundoff_floor(abs_value)});
        if (error <= target) break;
        const std::size_t worst = heap.top();
        heap.pop();
        const Cell c = cells[worst];
        if (c.depth >= tol.max_depth || cells.size() + 3 > kMaxCells) {
            std::ostringstream os;
            os << "integrate_2d: no convergence on " << r << " (error " << error << ", target "
               << target << ")";
            throw ConvergenceError(os.str(), value, error);
        }
        const double xm = 0.5 * (c.x0 + c.x1), ym = 0.5 * (c.y0 + c.y1);
        cells[worst] = make(c.x0, xm, c.y0, ym, c.quads[0], c.depth + 1);
        cells.push_back(make(xm, c.x1, c.y0, ym, c.quads[1], c.depth + 1));
        cells.push_back(make(c.x0, xm, ym, c.y1, c.quads[2], c.depth + 1));
        cells.push_back(make(xm, c.x1, ym, c.y1, c.quads[3], c.depth + 1));
        heap.push(worst);
        for (std::size_t k = cells.size() - 3; k < cells.size(); ++k) heap.push(k);
    }

    std::sort(cells.begin(), cells.end(), [](const Cell& p, const Cell& q) {
        return p.x0 < q.x0 || (p.x0 == q.x0 && p.y0 < q.y0);
    });
    QuadratureResult out;
    for (const auto& c : cells) {
        out.value += c.value;
        out.error_estimate += c.error;
    }
    out.panels = cells.size();
    return out;
}

/// Double-exponential (tanh-sinh) quadrature. A second rule family, independent of the
/// Gauss-Legendre path, tolerant of integrable endpoint singularities. Error is the
/// difference between successive step halvings.
template <class F>
QuadratureResult integrate_tanh_sinh(F&& g, double lo, double hi, const Tolerance& tol = {},
                                     std::span<const double> splits = {}) {
    if (!(lo < hi)) throw ParameterError("integrate_tanh_sinh needs lo < hi");
    constexpr double kHalfPi = std::numbers::pi / 2.0;
    constexpr double kTMax = 4.5;  // 1 - tanh reaches ~1e-61, so endpoint singularities are resolved
    constexpr int kMaxLevel = 10;

    QuadratureResult total;
    const auto pts = detail::breakpoints(lo, hi, splits);
    for (std::size_t seg = 0; seg + 1 < pts.size(); ++seg) {
        const double a = pts[seg], b = pts[seg + 1];
        const double half = 0.5 * (b - a);
        // Sample at abscissa t; offsets from the nearer end avoid cancellation.
        auto term = [&](double t) {
            const double u = kHalfPi * std::sinh(t);
            const double ch = std::cosh(u);
            const double w = kHalfPi * std::cosh(t) / (ch * ch);
            const double delta = 1.0 / (std::exp(std::abs(u)) * ch);  // 1 - tanh|u|
            const double off = half * delta;
            if (off == 0.0 || w == 0.0) return 0.0;
            const double x = t >= 0.0 ? b - off : a + off;
            const double v = g(x);
            detail::require_finite(v, x);
            return w * v;
        };

        double h = 1.0;
        double sum = term(0.0);
        for (double t = h; t <= kTMax; t += h) sum += term(t) + term(-t);
        double estimate = half * h * sum;
        double error = std::numeric_limits<double>::infinity();
        std::size_t samples = 0;
        for (int level = 1; level <= kMaxLevel; ++level) {
            h *= 0.5;
            for (double t = h; t <= kTMax; t += 2.0 * h) sum += term(t) + term(-t);
            const double next = half * h * sum;
            error = std::abs(next - estimate);
            estimate = next;
            samples = static_cast<std::size_t>(2.0 * kTMax / h);
            if (level >= 3 && error <= std::max(tol.abs, tol.rel * std::abs(estimate))) break;
        }
        if (error > std::max(tol.abs, tol.rel * std::abs(estimate))) {
            std::ostringstream os;
            os << "integrate_tanh_sinh: no convergence on [" << a << ", " << b << "]";
            throw ConvergenceError(os.str(), total.value + estimate, total.error_estimate + error);
        }
        total.value += estimate;
        total.error_estimate += error;
        total.panels += samples;
    }
    return total;
}

}  // namespace hhc::quad
