#include "qwalk/phase.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qwalk/errors.hpp"

using namespace qwalk;

// Reference fractions come from tests/oracle/walk_oracle.py (mpmath, 40 digits).

TEST(Omega, RationalReductionIsExact) {
    const Omega o = Omega::ratio(1, 11);
    for (std::int64_t k = -30; k <= 30; ++k) {
        const std::int64_t m = ((k * k) % 11 + 11) % 11;
        EXPECT_EQ(o.fractional_k2(k), static_cast<double>(m) / 11.0) << "k=" << k;
    }
}

TEST(Omega, RatioIsNormalized) {
    const Omega o = Omega::ratio(6, 18);
    EXPECT_EQ(o.numerator(), 1);
    EXPECT_EQ(o.denominator(), 3);
    EXPECT_THROW(Omega::ratio(1, 0), ConfigurationError);
}

TEST(Omega, NegativeNumeratorWrapsIntoUnitInterval) {
    const Omega o = Omega::ratio(-1, 3);
    EXPECT_EQ(o.fractional_k2(1), 2.0 / 3.0);
    EXPECT_EQ(o.fractional_k2(3), 0.0);
}

TEST(Omega, IntegerValuesGiveUnitPhase) {
    for (std::int64_t p : {0, 1, 2, -3}) {
        const Omega o = Omega::ratio(p, 1);
        EXPECT_TRUE(o.is_integer());
        for (std::int64_t k : {0, 1, 7, 2064, -1999}) {
            const auto ph = drift_phase(o, k);
            EXPECT_EQ(ph.real(), 1.0);
            EXPECT_EQ(ph.imag(), 0.0);
        }
    }
}

// mpmath at 50 digits, with the 2 pi Omega input taken as the exact double.
TEST(Omega, LargeSiteReductionMatchesOracle) {
    EXPECT_NEAR(Omega::two_pi(0.7).fractional_k2(2000), 0.8406573069118812, 1e-13);
    EXPECT_NEAR(Omega::two_pi(0.1).fractional_k2(2064), 0.5336446010989965, 1e-13);
    EXPECT_NEAR(Omega::ratio(1, 11).plus(1e-9).fractional_k2(2047), 0.09509929990909091, 1e-13);
    EXPECT_NEAR(Omega::decimal(0.3).fractional_k2(1999), 0.2999999999556355, 1e-13);
}

TEST(Omega, DivideByTwoPiBeatsPlainDivision) {
    // mpmath: double(0.1) / (2 pi) = 0.015915494309189534 + 5.93442968149242e-19
    const DoubleDouble q = divide_by_two_pi(0.1);
    EXPECT_EQ(q.hi, 0.015915494309189534);
    EXPECT_NEAR(q.lo, 5.93442968149242e-19, 1e-32);
}

TEST(Omega, ErrorFreeTransformsAreExact) {
    const double a = 0.1, b = 4260096.0;
    const DoubleDouble p = two_product(a, b);
    EXPECT_EQ(std::fma(a, b, -p.hi), p.lo);
    const DoubleDouble s = two_sum(1.0, 1e-17);
    EXPECT_EQ(s.hi, 1.0);
    EXPECT_EQ(s.lo, 1e-17);
}

TEST(Omega, RationalPhaseIsPeriodicInTwoQ) {
    for (auto [p, q] : {std::pair{1, 2}, {1, 3}, {3, 5}, {1, 9}, {1, 11}}) {
        const Omega o = Omega::ratio(p, q);
        for (std::int64_t k = -40; k <= 40; ++k) {
            EXPECT_EQ(drift_phase(o, k), drift_phase(o, k + 2 * q)) << p << "/" << q << " k=" << k;
        }
    }
}

TEST(PhaseTable, MatchesPointwisePhases) {
    const Omega o = Omega::two_pi(0.3);
    const PhaseTable table(o, -50, 101);
    ASSERT_EQ(table.size(), 101u);
    for (std::size_t i = 0; i < table.size(); ++i) {
        EXPECT_EQ(table[i], drift_phase(o, -50 + static_cast<std::int64_t>(i)));
        EXPECT_NEAR(std::abs(table[i]), 1.0, 1e-15);
    }
}

TEST(PhaseTable, DirectEvaluationAtSiteOne) {
    const auto ph = drift_phase(Omega::two_pi(0.1), 1);
    EXPECT_NEAR(ph.real(), std::cos(0.1), 1e-15);
    EXPECT_NEAR(ph.imag(), -std::sin(0.1), 1e-15);
}
