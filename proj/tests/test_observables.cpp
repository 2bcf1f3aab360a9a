#include "qwalk/observables.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "qwalk/errors.hpp"
#include "qwalk/evolution.hpp"

using namespace qwalk;

namespace {

ProbabilityField field_of(std::int64_t k_min, std::vector<double> F) {
    ProbabilityField f;
    f.k_min = k_min;
    f.F = std::move(F);
    return f;
}

ObservableSeries variance_series(const Omega& omega, std::int64_t steps, std::int64_t stride = 1) {
    WalkParams p;
    p.omega = omega;
    p.steps = steps;
    p.half_width = steps + 64;
    EvolveOptions opts;
    opts.record = {"variance"};
    opts.stride = stride;
    return evolve(new_state(p, InitialCondition::symmetric()), p, opts).series;
}

ProbabilityField walk_distribution(const Omega& omega, std::int64_t steps) {
    WalkParams p;
    p.omega = omega;
    p.steps = steps;
    p.half_width = steps + 64;
    SpinorField s = new_state(p, InitialCondition::symmetric());
    Propagator prop(p);
    for (std::int64_t n = 0; n < steps; ++n) prop.advance(s);
    return distribution(s);
}

}  // namespace

TEST(Distribution, SumsAmplitudes) {
    WalkParams p;
    p.half_width = 3;
    auto s = new_state(p, InitialCondition::symmetric());
    const auto f = distribution(s);
    EXPECT_EQ(f.size(), 7u);
    EXPECT_NEAR(f.at(0), 1.0, 1e-15);
    EXPECT_EQ(f.at(1), 0.0);
    // (1, i)/sqrt2: Re(a conj b) = Re(-i)/2 = 0
    EXPECT_NEAR(interference_term(s, 0), 0.0, 1e-16);
    s.b[s.index(0)] = s.a[s.index(0)];
    EXPECT_NEAR(interference_term(s, 0), 0.5, 4e-16);
}

TEST(Variance, TwoPointExample) {
    const auto f = field_of(-1, {0.5, 0.0, 0.5});
    EXPECT_DOUBLE_EQ(variance(f), 1.0);
    EXPECT_DOUBLE_EQ(mean_momentum(f), 0.0);
}

TEST(Variance, DeltaIsZero) {
    EXPECT_EQ(variance(field_of(-2, {0.0, 0.0, 1.0, 0.0, 0.0})), 0.0);
}

TEST(Variance, NotNormalizedIsRejected) {
    EXPECT_THROW((void)variance(field_of(0, {0.5, 0.4})), ValidationError);
    EXPECT_THROW((void)mean_momentum(field_of(0, {0.5, 0.6})), ValidationError);
}

TEST(Variance, TranslationInvariant) {
    const std::vector<double> F = {0.1, 0.0, 0.25, 0.3, 0.0, 0.2, 0.15};
    const double v0 = variance(field_of(-3, F));
    for (std::int64_t shift : {-1000, -7, 4, 12345}) {
        EXPECT_EQ(variance(field_of(-3 + shift, F)), v0) << shift;
        EXPECT_NEAR(mean_momentum(field_of(-3 + shift, F)) - mean_momentum(field_of(-3, F)),
                    static_cast<double>(shift), 1e-12);
    }
}

TEST(Participation, Examples) {
    EXPECT_DOUBLE_EQ(participation_number(field_of(0, {0.25, 0.25, 0.25, 0.25})), 4.0);
    EXPECT_DOUBLE_EQ(participation_number(field_of(5, {1.0})), 1.0);
}

TEST(LinearFit, ExactLine) {
    const std::vector<double> x = {0, 1, 2, 3};
    const std::vector<double> y = {1, 3, 5, 7};
    const auto r = linear_fit(x, y);
    EXPECT_DOUBLE_EQ(r.slope, 2.0);
    EXPECT_DOUBLE_EQ(r.intercept, 1.0);
    EXPECT_DOUBLE_EQ(r.r_squared, 1.0);
    EXPECT_EQ(r.n_points, 4u);
}

TEST(LinearFit, TooFewPoints) {
    const std::vector<double> x = {0, 1};
    EXPECT_THROW((void)linear_fit(x, x), FitError);
}

TEST(LocalizationFit, ExactExponential) {
    std::vector<double> F;
    const double ell = 3.0;
    for (std::int64_t k = -40; k <= 40; ++k) F.push_back(std::exp(-std::abs(static_cast<double>(k)) / ell));
    const auto r = localization_length_fit(field_of(-40, F));
    EXPECT_TRUE(r.localized);
    EXPECT_NEAR(r.derived, ell, 1e-9);
    EXPECT_NEAR(r.r_squared, 1.0, 1e-12);
}

TEST(LocalizationFit, ScaleAndTranslationFree) {
    std::vector<double> F;
    for (std::int64_t k = -30; k <= 30; ++k) {
        F.push_back(std::exp(-std::abs(static_cast<double>(k)) / 2.5) * (1.0 + 0.1 * std::cos(1.3 * k)));
    }
    const auto base = localization_length_fit(field_of(-30, F));
    std::vector<double> scaled = F;
    for (double& v : scaled) v *= 3.0;
    EXPECT_NEAR(localization_length_fit(field_of(70, scaled)).derived, base.derived, 1e-9);
}

TEST(LocalizationFit, UniformFieldIsNotLocalized) {
    const auto r = localization_length_fit(field_of(0, std::vector<double>(50, 0.02)));
    EXPECT_FALSE(r.localized);
    EXPECT_TRUE(std::isinf(r.derived));
}

TEST(LocalizationFit, TooFewSitesAboveFloor) {
    EXPECT_THROW((void)localization_length_fit(field_of(0, {1.0, 0.0, 0.0})), FitError);
}

// Oracle: numpy walk, ln F vs |k - mean| over F > 1e-14 with 5% trimmed.
TEST(LocalizationFit, IrrationalWalkAtT2000) {
    const auto f = walk_distribution(Omega::two_pi(0.1), 2000);
    const auto r = localization_length_fit(f);
    EXPECT_TRUE(r.localized);
    EXPECT_NEAR(r.derived, 2.052874162806681, 1e-9);
    EXPECT_NEAR(r.r_squared, 0.9678317591281547, 1e-9);
    EXPECT_GE(r.r_squared, 0.9);
    EXPECT_NEAR(variance(f), 6.575133130670, 1e-8);
}

TEST(GrowthFit, PowerLaw) {
    ObservableSeries s;
    s.names = {"variance"};
    s.columns.resize(1);
    for (std::int64_t t = 1; t <= 100; ++t) {
        s.times.push_back(t);
        s.columns[0].push_back(0.7 * std::pow(static_cast<double>(t), 1.5));
    }
    const auto r = growth_exponent_fit(s, 10, 100);
    EXPECT_NEAR(r.derived, 1.5, 1e-12);
    EXPECT_NEAR(r.r_squared, 1.0, 1e-12);
    EXPECT_NEAR(quadratic_coefficient(s, 10, 100), 0.0, 1.0);
}

TEST(GrowthFit, Errors) {
    ObservableSeries s;
    s.names = {"variance"};
    s.columns.resize(1);
    for (std::int64_t t = 1; t <= 5; ++t) {
        s.times.push_back(t);
        s.columns[0].push_back(static_cast<double>(t));
    }
    EXPECT_THROW((void)growth_exponent_fit(s, 1, 5), FitError);

    ObservableSeries flat;
    flat.names = {"variance"};
    flat.columns.resize(1);
    for (std::int64_t t = 1; t <= 20; ++t) {
        flat.times.push_back(t);
        flat.columns[0].push_back(0.0);
    }
    EXPECT_THROW((void)growth_exponent_fit(flat, 1, 20), FitError);
}

TEST(GrowthFit, HadamardIsBallistic) {
    const auto s = variance_series(Omega::ratio(1, 1), 2000, 10);
    const auto r = growth_exponent_fit(s, 500, 2000);
    EXPECT_NEAR(r.derived, 1.999996, 5e-6);
    EXPECT_NEAR(quadratic_coefficient(s, 500, 2000), 0.292893436441435, 1e-9);
    // 1 - 1/sqrt2
    EXPECT_NEAR(quadratic_coefficient(s, 500, 2000), 1.0 - 1.0 / std::numbers::sqrt2, 1e-6);
}

TEST(GrowthFit, RationalOmegaFrozenValues) {
    struct Case {
        Omega omega;
        double c;
    };
    const Case cases[] = {
        {Omega::ratio(1, 3), 0.12542},   {Omega::ratio(1, 5), 0.034773}, {Omega::ratio(3, 5), 0.073693},
        {Omega::ratio(1, 7), 0.0071899}, {Omega::ratio(1, 9), 0.0089757}, {Omega::ratio(1, 11), 0.0038121},
    };
    for (const auto& c : cases) {
        const auto s = variance_series(c.omega, 2000, 10);
        EXPECT_NEAR(quadratic_coefficient(s, 500, 2000), c.c, 2e-4 * c.c) << c.omega.describe();
        EXPECT_LT(quadratic_coefficient(s, 500, 2000), 0.292893436441435);
    }
}

TEST(ResonancePeaks, SyntheticComb) {
    std::vector<double> F(81, 0.0);
    for (std::int64_t k = -40; k <= 40; k += 2) F[static_cast<std::size_t>(k + 40)] = 1e-4;
    for (std::int64_t k : {-22, 0, 22}) F[static_cast<std::size_t>(k + 40)] = 0.3;
    F[static_cast<std::size_t>(12 + 40)] = 0.05;
    const auto rep = resonance_peaks(field_of(-40, F), 11);
    ASSERT_GE(rep.peaks.size(), 4u);
    EXPECT_EQ(rep.peaks.front().probability, 0.3);
    EXPECT_TRUE(rep.checked >= 1 && rep.checked <= rep.peaks.size());
}

TEST(ResonancePeaks, MisalignedPeakFails) {
    std::vector<double> F(61, 0.0);
    F[30] = 0.4;      // k = 0
    F[30 + 6] = 0.5;  // k = 6, not near a multiple of 11
    F[30 + 22] = 0.1;
    const auto rep = resonance_peaks(field_of(-30, F), 11);
    EXPECT_FALSE(rep.aligned);

    std::vector<double> G(61, 0.0);
    G[30] = 0.45;
    G[30 + 12] = 0.45;  // k = 12, one away from 11
    G[30 - 22] = 0.1;
    EXPECT_TRUE(resonance_peaks(field_of(-30, G), 11).aligned);
}

TEST(ResonancePeaks, WalkAtOmegaOneEleventh) {
    const auto f = walk_distribution(Omega::ratio(1, 11), 2000);
    const auto rep = resonance_peaks(f, 11);
    EXPECT_EQ(rep.checked, 7u);
    EXPECT_TRUE(rep.aligned);
}
