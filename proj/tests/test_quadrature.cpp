#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "hhc/oracle.hpp"
#include "hhc/quadrature.hpp"
#include "hhc/random.hpp"

using namespace hhc;
using namespace hhc::quad;

namespace {
constexpr std::array<double, 1> kHalf{0.5};
}

TEST(Integrate1d, Examples) {
    EXPECT_NEAR(integrate_1d([](double x) { return x * x * x; }, 0.0, 1.0).value, 0.25, 1e-14);
    // |1 - 2l| l: two pieces of 1/8 each.
    const auto kink = integrate_1d([](double l) { return std::abs(1.0 - 2.0 * l) * l; }, 0.0, 1.0, {}, kHalf);
    EXPECT_NEAR(kink.value, 0.25, 1e-14);
    const auto g = integrate_1d([](double l) { return (1.0 - 2.0 * l) * (1.0 - l); }, 0.0, 1.0);
    EXPECT_NEAR(g.value, 1.0 / 6.0, 1e-14);
}

TEST(Integrate1d, SinglePanelPolynomialExactness) {
    // The two-half refinement of a 10-point Gauss rule is exact through degree 19.
    for (int k = 0; k <= 19; ++k) {
        const auto r = integrate_1d([k](double x) { return std::pow(x, k); }, 0.0, 1.0);
        const double exact = 1.0 / (k + 1);
        EXPECT_EQ(r.panels, 1u) << "degree " << k;
        EXPECT_LE(std::abs(r.value - exact), 1e-13 * exact) << "degree " << k;
        EXPECT_LE(std::abs(r.value - exact), std::max(r.error_estimate, 1e-13 * (1 + exact)));
    }
}

TEST(Integrate1d, PolynomialSuiteAgainstOracle) {
    Rng rng(3);
    for (int n = 0; n < 30; ++n) {
        oracle::RationalPoly1 p;
        for (int k = 0; k <= 15; ++k) p.add_term(k, oracle::make_rational(rng.between(-9, 9), rng.between(1, 9)));
        const oracle::Rational lo = oracle::make_rational(rng.between(-8, 0), 4);
        const oracle::Rational hi = lo + oracle::make_rational(rng.between(1, 8), 4);
        const double exact = oracle::to_double(oracle::poly_integral_1d_exact(p, lo, hi));
        const auto r = integrate_1d([&](double x) {
            double acc = 0.0;
            for (const auto& [k, c] : p.terms()) acc += oracle::to_double(c) * std::pow(x, k);
            return acc;
        }, oracle::to_double(lo), oracle::to_double(hi));
        EXPECT_LE(std::abs(r.value - exact), std::max(r.error_estimate, 1e-13 * (1 + std::abs(exact))));
    }
}

TEST(Integrate1d, KinkSplitAtHalf) {
    const auto r = integrate_1d([](double t) { return std::abs(1.0 - 2.0 * t); }, 0.0, 1.0, {}, kHalf);
    EXPECT_NEAR(r.value, 0.5, 1e-13);
    EXPECT_EQ(r.panels, 2u);
}

TEST(Integrate1d, AdaptivityFindsUnsplitKink) {
    const auto r = integrate_1d([](double t) { return std::abs(1.0 - 2.0 * t); }, 0.0, 1.0);
    EXPECT_NEAR(r.value, 0.5, 1e-10);
}

TEST(Integrate1d, Additivity) {
    Rng rng(5);
    for (int n = 0; n < 20; ++n) {
        const double a1 = rng.uniform(-2, 2), b1 = rng.uniform(0.5, 4), a2 = rng.uniform(-1, 1);
        const double b2 = rng.uniform(-1.5, 1.5);
        auto g = [&](double x) { return a1 * std::sin(b1 * x) + a2 * std::exp(b2 * x) + x * x; };
        const double lo = rng.uniform(-3, 0), hi = lo + rng.uniform(0.5, 4);
        const double mid = lo + rng.uniform(0.1, 0.9) * (hi - lo);
        const auto whole = integrate_1d(g, lo, hi);
        const auto left = integrate_1d(g, lo, mid);
        const auto right = integrate_1d(g, mid, hi);
        const double budget = whole.error_estimate + left.error_estimate + right.error_estimate +
                              1e-13 * (1 + std::abs(whole.value));
        EXPECT_LE(std::abs(whole.value - (left.value + right.value)), budget);
    }
}

TEST(Integrate1d, Errors) {
    EXPECT_THROW(integrate_1d([](double) { return 1.0; }, 1.0, 1.0), ParameterError);
    EXPECT_THROW(integrate_1d([](double x) { return x > 0.3 ? NAN : 1.0; }, 0.0, 1.0), NonFiniteError);
    try {
        integrate_1d([](double x) { return std::pow(x, -0.95); }, 0.0, 1.0);
        FAIL() << "expected convergence failure";
    } catch (const ConvergenceError& e) {
        EXPECT_GT(e.best_value(), 1.0);
        EXPECT_GT(e.error_estimate(), 0.0);
    }
}

TEST(Integrate2d, Examples) {
    EXPECT_NEAR(integrate_2d([](double x, double y) { return x * y; }, Rect{0, 1, 0, 1}).value, 0.25, 1e-14);
    EXPECT_NEAR(integrate_2d([](double, double) { return 1.0; }, Rect{0, 2, 0, 3}).value, 6.0, 1e-13);
    // (1-2l)(1-2m) 4 (1-l)(1-m): 4 (1/6)^2 = 1/9, and 1/36 after the area/4 prefactor.
    auto g = [](double l, double m) { return (1 - 2 * l) * (1 - 2 * m) * 4 * (1 - l) * (1 - m); };
    const auto r = integrate_2d(g, Rect{0, 1, 0, 1}, {}, kHalf, kHalf);
    EXPECT_NEAR(r.value, 1.0 / 9.0, 1e-14);
    EXPECT_NEAR(r.value / 4.0, 1.0 / 36.0, 1e-14);
    EXPECT_EQ(r.panels, 4u);
}

TEST(Integrate2d, SeparableMatchesProductOf1d) {
    Rng rng(9);
    for (int n = 0; n < 10; ++n) {
        const double k1 = rng.uniform(-2, 2), k2 = rng.uniform(-2, 2);
        auto u = [&](double x) { return std::cos(k1 * x) + x; };
        auto v = [&](double y) { return std::exp(k2 * y); };
        const Rect r{rng.uniform(-1, 0), rng.uniform(0.5, 2), rng.uniform(-1, 0), rng.uniform(0.5, 2)};
        const auto iu = integrate_1d(u, r.a, r.b);
        const auto iv = integrate_1d(v, r.c, r.d);
        const auto i2 = integrate_2d([&](double x, double y) { return u(x) * v(y); }, r);
        const double budget = i2.error_estimate + std::abs(iu.value) * iv.error_estimate +
                              std::abs(iv.value) * iu.error_estimate + 1e-13 * (1 + std::abs(i2.value));
        EXPECT_LE(std::abs(i2.value - iu.value * iv.value), budget);
    }
}

TEST(Integrate2d, OracleAgreementOnPolynomials) {
    Rng rng(21);
    for (int n = 0; n < 10; ++n) {
        oracle::RationalPoly2 p;
        for (int i = 0; i <= 6; ++i)
            for (int j = 0; i + j <= 6; ++j) p.add_term(i, j, oracle::make_rational(rng.between(0, 9), 4));
        const oracle::RationalRect rr{oracle::make_rational(-1, 2), oracle::make_rational(3, 2),
                                      oracle::make_rational(1, 3), oracle::make_rational(2)};
        const double exact = oracle::to_double(oracle::poly_integral_2d_exact(p, rr));
        const auto r = integrate_2d([&](double x, double y) {
            double acc = 0.0;
            for (const auto& [k, c] : p.terms())
                acc += oracle::to_double(c) * std::pow(x, k.first) * std::pow(y, k.second);
            return acc;
        }, rr.to_rect());
        EXPECT_LE(std::abs(r.value - exact), 1e-12 * std::abs(exact));
    }
}

TEST(Integrate2d, RejectsInvalidRect) {
    EXPECT_THROW(integrate_2d([](double, double) { return 1.0; }, Rect{1, 0, 0, 1}), ParameterError);
}

TEST(TanhSinh, AgreesWithGaussLegendreOnSmoothIntegrands) {
    auto g = [](double x) { return std::exp(-x) * std::cos(3 * x); };
    const auto a = integrate_1d(g, 0.0, 2.0);
    const auto b = integrate_tanh_sinh(g, 0.0, 2.0);
    EXPECT_NEAR(a.value, b.value, 1e-12);
}

TEST(TanhSinh, HandlesEndpointSingularity) {
    // integral_0^1 x^{-1/2} = 2
    const auto r = integrate_tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    EXPECT_NEAR(r.value, 2.0, 1e-10);
}
