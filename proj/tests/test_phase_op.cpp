#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "cavitycat/phase_op.hpp"

using namespace cavitycat;
using std::numbers::pi;

TEST(PhaseOpSum, WrapPhaseIntoHalfOpenInterval) {
    EXPECT_DOUBLE_EQ(PhaseOpSum::wrap_phase(-pi), pi);
    EXPECT_DOUBLE_EQ(PhaseOpSum::wrap_phase(pi), pi);
    EXPECT_NEAR(PhaseOpSum::wrap_phase(3.0 * pi / 2.0), -pi / 2.0, 1e-15);
    EXPECT_NEAR(PhaseOpSum::wrap_phase(4.0 * pi + 0.25), 0.25, 1e-14);
}

TEST(PhaseOpSum, CanonicalMergesPhasesModuloTwoPi) {
    const PhaseOpSum op({{Complex{0.5, 0.0}, -pi}, {Complex{0.25, 0.0}, pi}, {Complex{1.0, 0.0}, 2.0 * pi}});
    const PhaseOpSum c = op.canonical();
    ASSERT_EQ(c.size(), 2u);
    EXPECT_NEAR(c.terms()[0].weight.real(), 0.75, 1e-15);
    EXPECT_DOUBLE_EQ(c.terms()[0].phase, pi);
    EXPECT_NEAR(c.terms()[1].phase, 0.0, 1e-15);
}

TEST(PhaseOpSum, CancellingTermsDrop) {
    const PhaseOpSum op({{Complex{0.5, 0.0}, 0.3}, {Complex{-0.5, 0.0}, 0.3}});
    EXPECT_TRUE(op.canonical().empty());
}

// Diagonal values are the operator; check closure of product and adjoint on
// random sums by comparing number-state values.
TEST(PhaseOpSum, ProductAndAdjointAreClosedOnDiagonalValues) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<PhaseTerm> ta, tb;
        for (int k = 0; k < 3; ++k) {
            ta.push_back({Complex{u(rng), u(rng)}, u(rng)});
            tb.push_back({Complex{u(rng), u(rng)}, u(rng)});
        }
        const PhaseOpSum a(ta), b(tb);
        const PhaseOpSum ab = a * b;
        const PhaseOpSum ad = a.adjoint();
        for (long n = 0; n < 12; ++n) {
            EXPECT_LT(std::abs(ab.value_at(n) - a.value_at(n) * b.value_at(n)), 1e-11);
            EXPECT_LT(std::abs(ad.value_at(n) - std::conj(a.value_at(n))), 1e-12);
            EXPECT_LT(std::abs(ab.canonical().value_at(n) - ab.value_at(n)), 1e-11);
        }
    }
}

TEST(PhaseOpSum, ApproxEqualComparesOperators) {
    const PhaseOpSum a({{Complex{1.0, 0.0}, 0.5}});
    const PhaseOpSum b({{Complex{1.0, 0.0}, 0.5 + 2.0 * pi}});
    EXPECT_TRUE(approx_equal(a, b));
    EXPECT_FALSE(approx_equal(a, PhaseOpSum::identity()));
}

TEST(PhaseOpSum, RejectsNonFiniteTerms) {
    EXPECT_THROW(PhaseOpSum({{Complex{1.0, 0.0}, std::nan("")}}), std::invalid_argument);
}
