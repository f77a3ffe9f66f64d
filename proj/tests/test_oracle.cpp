#include <gtest/gtest.h>

#include "hhc/oracle.hpp"
#include "hhc/random.hpp"

using namespace hhc::oracle;
using hhc::Rng;

namespace {

Rational q(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }

RationalPoly2 random_poly(Rng& rng, int max_total_degree) {
    RationalPoly2 p;
    for (int i = 0; i <= max_total_degree; ++i)
        for (int j = 0; i + j <= max_total_degree; ++j)
            if (rng.below(2) == 0) p.add_term(i, j, q(rng.between(-9, 9), rng.between(1, 7)));
    return p;
}

RationalRect random_rect(Rng& rng) {
    RationalRect r;
    r.a = q(rng.between(-12, 12), rng.between(1, 5));
    r.b = r.a + q(rng.between(1, 12), rng.between(1, 5));
    r.c = q(rng.between(-12, 12), rng.between(1, 5));
    r.d = r.c + q(rng.between(1, 12), rng.between(1, 5));
    return r;
}

}  // namespace

TEST(Rational, LowestTermsAndPositiveDenominator) {
    const Rational r = q(6, -8);
    EXPECT_EQ(numerator(r), -3);
    EXPECT_EQ(denominator(r), 4);
    EXPECT_THROW(make_rational(1, 0), hhc::ParameterError);
}

TEST(Rational, RandomizedFieldLaws) {
    Rng rng(7);
    for (int n = 0; n < 500; ++n) {
        const Rational a = q(rng.between(-1000, 1000), rng.between(1, 999));
        const Rational b = q(rng.between(-1000, 1000), rng.between(1, 999));
        const Rational c = q(rng.between(-1000, 1000), rng.between(1, 999));
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ((a + b) - b, a);
        EXPECT_GT(denominator(a * b + c), 0);
        // lowest terms: gcd(num, den) == 1
        const Rational s = a * b + c;
        EXPECT_EQ(gcd(numerator(s), denominator(s)), 1);
    }
}

TEST(Poly2, NormalizationMergesAndDropsZeros) {
    RationalPoly2 p{{1, 1, q(2)}, {1, 1, q(-2)}, {2, 0, q(1, 3)}, {2, 0, q(1, 6)}};
    ASSERT_EQ(p.terms().size(), 1u);
    EXPECT_EQ(p.terms().at({2, 0}), q(1, 2));
}

TEST(PolyIntegral2d, Examples) {
    EXPECT_EQ(poly_integral_2d_exact(RationalPoly2{{2, 2, q(1)}}, RationalRect{}), q(1, 9));
    EXPECT_EQ(poly_integral_2d_exact(RationalPoly2{{1, 1, q(1)}}, RationalRect{}), q(1, 4));
    EXPECT_EQ(poly_integral_2d_exact(RationalPoly2::constant(1), RationalRect{q(0), q(2), q(0), q(3)}),
              q(6));
}

TEST(PolyIntegral1d, Examples) {
    EXPECT_EQ(poly_integral_1d_exact(RationalPoly1{{2, q(1)}}, q(0), q(1)), q(1, 3));
    // (1 - 2l)(1 - l)
    const RationalPoly1 g = RationalPoly1::affine(1, -2) * RationalPoly1::affine(1, -1);
    EXPECT_EQ(poly_integral_1d_exact(g, q(0), q(1)), q(1, 6));
    // |1 - 2l| l, split at 1/2
    const RationalPoly1 lam{{1, q(1)}};
    const Rational left = poly_integral_1d_exact(RationalPoly1::affine(1, -2) * lam, q(0), q(1, 2));
    const Rational right = poly_integral_1d_exact(RationalPoly1::affine(-1, 2) * lam, q(1, 2), q(1));
    // the pieces are unequal: 1/24 on [0, 1/2] and 5/24 on [1/2, 1]
    EXPECT_EQ(left, q(1, 24));
    EXPECT_EQ(right, q(5, 24));
    EXPECT_EQ(left + right, q(1, 4));
}

TEST(PolyMixedPartial, Examples) {
    EXPECT_EQ(poly_mixed_partial(RationalPoly2{{2, 2, q(1)}}), (RationalPoly2{{1, 1, q(4)}}));
    EXPECT_EQ(poly_mixed_partial(RationalPoly2{{1, 1, q(1)}}), RationalPoly2::constant(1));
    EXPECT_TRUE(poly_mixed_partial(RationalPoly2{{3, 0, q(1)}}).is_zero());
}

TEST(ComposeAffine, AgreesWithPointEvaluation) {
    Rng rng(11);
    for (int n = 0; n < 20; ++n) {
        const RationalPoly2 p = random_poly(rng, 5);
        const Rational x0 = q(rng.between(-5, 5), 3), x1 = q(rng.between(-5, 5), 2);
        const Rational y0 = q(rng.between(-5, 5), 7), y1 = q(rng.between(-5, 5), 4);
        const RationalPoly2 c = compose_affine(p, x0, x1, y0, y1);
        const Rational lam = q(rng.between(-9, 9), 5), mu = q(rng.between(-9, 9), 6);
        EXPECT_EQ(c.eval(lam, mu), p.eval(x0 + x1 * lam, y0 + y1 * mu));
    }
}

TEST(Lemma1Exact, Examples) {
    const Lemma1Sides s = lemma1_sides_exact(RationalPoly2{{2, 2, q(1)}}, RationalRect{});
    EXPECT_EQ(s.corner_avg, q(1, 4));
    EXPECT_EQ(s.integral_mean, q(1, 9));
    EXPECT_EQ(s.marginal_a, q(1, 3));
    EXPECT_EQ(s.deviation, q(1, 36));
    EXPECT_EQ(s.identity_rhs, q(1, 36));
    EXPECT_EQ(lemma1_check_exact(RationalPoly2{{2, 2, q(1)}}, RationalRect{}), 0);

    const Lemma1Sides b = lemma1_sides_exact(RationalPoly2{{1, 1, q(1)}}, RationalRect{});
    EXPECT_EQ(b.deviation, 0);
    EXPECT_EQ(b.identity_rhs, 0);
    EXPECT_EQ(lemma1_check_exact(RationalPoly2::constant(q(-17, 3)), RationalRect{q(-2), q(5), q(1), q(4)}), 0);
}

TEST(Lemma1Exact, RandomPolynomialsVanish) {
    Rng rng(2024);
    for (int n = 0; n < 40; ++n) {
        const RationalPoly2 p = random_poly(rng, 6);
        const RationalRect r = random_rect(rng);
        EXPECT_EQ(lemma1_check_exact(p, r), 0) << p.to_string();
    }
}

TEST(Lemma1Exact, RejectsDegenerateRectangle) {
    EXPECT_THROW(lemma1_check_exact(RationalPoly2::constant(1), RationalRect{q(1), q(1), q(0), q(1)}),
                 hhc::ParameterError);
}

TEST(FiveTermChainExact, X2Y2) {
    const auto v = five_term_chain_exact(RationalPoly2{{2, 2, q(1)}}, RationalRect{});
    EXPECT_EQ(v[0], q(1, 16));
    EXPECT_EQ(v[1], q(1, 12));
    EXPECT_EQ(v[2], q(1, 9));
    EXPECT_EQ(v[3], q(1, 6));
    EXPECT_EQ(v[4], q(1, 4));
}
