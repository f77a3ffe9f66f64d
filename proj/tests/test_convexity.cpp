#include <gtest/gtest.h>

#include "hhc/convexity.hpp"

using namespace hhc;

namespace {

const Rect kUnit{0, 1, 0, 1};

SamplingPlan small_plan(std::uint64_t seed = 42) {
    SamplingPlan p;
    p.random_trials = 2000;
    p.seed = seed;
    return p;
}

GenParams params(double s, double alpha, double m1, double m2) {
    return GenParams{s, s, alpha, alpha, m1, m2, 1.0};
}

void expect_witness_reproduces(const Surface& g, ConvexityClass cls, const GenParams& p,
                               const MembershipReport& rep) {
    const MarginTerms t = class_terms(g, cls, p, rep.witness);
    EXPECT_NEAR(t.margin(), rep.worst_margin, 1e-12);
    EXPECT_EQ(t.lhs, rep.lhs);
    EXPECT_EQ(t.rhs, rep.rhs);
}

}  // namespace

TEST(Def1, BilinearIsExactEquality) {
    const auto rep = check_def1_coordinated(corpus_surface("xy"), kUnit, small_plan());
    EXPECT_EQ(rep.verdict, Verdict::no_violation_found);
    EXPECT_NEAR(rep.worst_margin, 0.0, 1e-12);
    EXPECT_GE(rep.worst_margin, -1e-9);
}

TEST(Def1, ConcaveSurfaceIsViolated) {
    const Surface& s = corpus_surface("neg_x2_y2");
    const auto rep = check_def1_coordinated(s, kUnit, small_plan());
    EXPECT_EQ(rep.verdict, Verdict::violated);
    EXPECT_LT(rep.worst_margin, -0.1);
    expect_witness_reproduces(s, ConvexityClass::coordinated, GenParams::classical(), rep);
    // midpoint of (0,0),(1,1): LHS -0.5 against RHS -1
    const auto mid = class_terms(s, ConvexityClass::coordinated, GenParams::classical(), {0, 0, 1, 1, 0.5, 0.5});
    EXPECT_DOUBLE_EQ(mid.lhs, -0.5);
    EXPECT_DOUBLE_EQ(mid.rhs, -1.0);
}

TEST(Def1, X2Y2NoViolation) {
    const auto rep = check_def1_coordinated(corpus_surface("x2y2"), kUnit, small_plan());
    EXPECT_EQ(rep.verdict, Verdict::no_violation_found);
    EXPECT_EQ(rep.samples_checked, 81L * 17 * 17 + 2000);
}

TEST(ClassFirst, ConstantWithUnitMIsExact) {
    const Surface& one = corpus_surface("one");
    for (double s : {0.3, 0.75, 1.0})
        for (double a : {0.0, 0.5, 1.0}) {
            const auto rep = check_class_first(one, kUnit, params(s, a, 1, 1), small_plan());
            EXPECT_EQ(rep.verdict, Verdict::no_violation_found) << s << " " << a;
            EXPECT_NEAR(rep.worst_margin, 0.0, 1e-12);
        }
}

TEST(ClassFirst, ConstantWithHalfM2IsViolated) {
    const Surface& one = corpus_surface("one");
    const GenParams p = params(1, 1, 1, 0.5);
    const auto rep = check_class_first(one, kUnit, p, small_plan());
    EXPECT_EQ(rep.verdict, Verdict::violated);
    expect_witness_reproduces(one, ConvexityClass::first_sense, p, rep);
    // RHS = lm + (1/2) l(1-m) + m(1-l) + (1/2)(1-l)(1-m) = (1+m)/2 is independent of l.
    const double l = rep.witness[4], m = rep.witness[5];
    EXPECT_NEAR(rep.rhs, l * m + 0.5 * l * (1 - m) + m * (1 - l) + 0.5 * (1 - l) * (1 - m), 1e-15);
    EXPECT_NEAR(rep.worst_margin, -0.5, 1e-12);  // attained at m = 0
}

TEST(ClassFirst, FourXYClassicalNoViolation) {
    const auto rep = check_class_first(corpus_surface("4xy"), kUnit, GenParams::classical(), small_plan());
    EXPECT_EQ(rep.verdict, Verdict::no_violation_found);
    EXPECT_GE(rep.worst_margin, -1e-9);
}

TEST(ClassFirst, HullOutsideDomainNamesScaledCorner) {
    const Surface s("unit_only", kUnit, [](double, double) { return 1.0; }, [](double, double) { return 0.0; });
    try {
        check_class_first(s, kUnit, params(1, 1, 0.5, 1), small_plan());
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_EQ(e.x(), 2.0);
        EXPECT_NE(std::string(e.what()).find("scaled corner"), std::string::npos);
    }
}

TEST(ClassSecond, Examples) {
    EXPECT_EQ(check_class_second(corpus_surface("one"), kUnit, GenParams::classical(), small_plan()).verdict,
              Verdict::no_violation_found);
    EXPECT_EQ(check_class_second(corpus_surface("4xy"), kUnit, GenParams::classical(), small_plan()).verdict,
              Verdict::no_violation_found);
    const GenParams p = params(1, 1, 0.5, 1);
    const auto rep = check_class_second(corpus_surface("one"), kUnit, p, small_plan());
    EXPECT_EQ(rep.verdict, Verdict::violated);
    expect_witness_reproduces(corpus_surface("one"), ConvexityClass::second_sense, p, rep);
}

TEST(Classes, CoincideWhenSIsOne) {
    for (const auto& s : corpus())
        for (double a : {0.0, 0.4, 1.0})
            for (double m : {0.5, 1.0}) {
                const GenParams p{1, 1, a, 1 - a / 2, m, 1, 1};
                const auto first = check_class_first(s, kUnit, p, small_plan(7));
                const auto second = check_class_second(s, kUnit, p, small_plan(7));
                EXPECT_EQ(first.worst_margin, second.worst_margin) << s.name();
                EXPECT_EQ(first.witness, second.witness) << s.name();
            }
}

TEST(Classes, Deterministic) {
    const GenParams p = params(0.5, 0.5, 0.5, 1);
    for (const auto& s : corpus()) {
        const auto r1 = check_class_first(s, kUnit, p, small_plan(3));
        const auto r2 = check_class_first(s, kUnit, p, small_plan(3));
        EXPECT_EQ(r1.worst_margin, r2.worst_margin);
        EXPECT_EQ(r1.witness, r2.witness);
        EXPECT_EQ(r1.samples_checked, r2.samples_checked);
        expect_witness_reproduces(s, ConvexityClass::first_sense, p, r1);
    }
}

TEST(Classes, Def1EquivalenceAtClassicalParameters) {
    for (const auto& s : corpus()) {
        const auto d1 = check_def1_coordinated(s, kUnit, small_plan());
        const auto k1 = check_class_first(s, kUnit, GenParams::classical(), small_plan());
        EXPECT_EQ(d1.verdict, k1.verdict) << s.name();
        EXPECT_EQ(d1.worst_margin, k1.worst_margin) << s.name();
    }
}

TEST(Classes, ZeroToZeroIsOne) {
    // theta = 0 and lambda = 0: lambda^theta = 1, so all weight stays on (x, y).
    const GenParams p{1, 1, 0, 0, 1, 1, 1};
    const auto t = class_terms(corpus_surface("x2y2"), ConvexityClass::first_sense, p, {1, 1, 0, 0, 0, 0});
    EXPECT_EQ(t.rhs, 1.0);
}

TEST(SamplingPlan, Validation) {
    SamplingPlan p;
    p.grid_per_axis = 1;
    EXPECT_THROW(check_def1_coordinated(corpus_surface("xy"), kUnit, p), ParameterError);
}
