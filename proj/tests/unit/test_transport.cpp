#include <gtest/gtest.h>

#include <cmath>

#include "hjhomog/types.hpp"
#include "hjhomog/transport1d.hpp"

using namespace hjh;

TEST(Transport, AdaptiveSimpsonOnPolynomialAndSingularFree) {
    EXPECT_NEAR(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-12), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 2.0, 1e-11), std::exp(2.0) - 1.0, 1e-9);
}

TEST(Transport, HarmonicMeanSpeedOfTwoPlusSine) {
    // int_0^1 dr / (2 + sin 2 pi r) = 1/sqrt(3)
    const EffectiveSpeed s = effective_speed(VelocityField::sinusoidal(2.0, 1.0));
    EXPECT_NEAR(s.xi, std::sqrt(3.0), 1e-9);
    EXPECT_NEAR(s.harmonicIntegral, 1.0 / std::sqrt(3.0), 1e-9);
    EXPECT_FALSE(s.pinned);
    EXPECT_NEAR(s.odeXi, std::sqrt(3.0), 1e-3);
}

TEST(Transport, NegativeFieldMovesLeft) {
    const EffectiveSpeed s = effective_speed(VelocityField::sinusoidal(-2.0, 1.0));
    EXPECT_NEAR(s.xi, -std::sqrt(3.0), 1e-9);
}

TEST(Transport, VanishingFieldPinsEveryOrbit) {
    const VelocityField F = VelocityField::pinned(1.0);
    const EffectiveSpeed s = effective_speed(F);
    EXPECT_TRUE(s.pinned);
    EXPECT_EQ(s.xi, 0.0);
    ASSERT_FALSE(s.zeros.empty());
    EXPECT_NEAR(s.zeros.front(), 0.0, 1e-9);

    const double eps = 0.05;
    const Trajectory tr = integrate_char(F, eps, 0.3 * eps, 1000.0, eps / 16.0);
    for (double y : tr.y) {
        EXPECT_GE(y, -1e-12);
        EXPECT_LE(y, eps + 1e-12);
    }
}

TEST(Transport, CharacteristicMatchesClosedFormForConstantField) {
    const Trajectory tr = integrate_char(VelocityField::constant(1.5), 0.1, 0.2, 2.0, 0.005);
    EXPECT_NEAR(tr.y.back(), 0.2 + 3.0, 1e-12);
    EXPECT_LE(tr.halvingGap, 1e-12);
}

TEST(Transport, CharacteristicAgreesWithHalvedStep) {
    const Trajectory tr = integrate_char(VelocityField::sinusoidal(2.0, 1.0), 0.01, 0.0, 1.0, 0.01 / 48.0);
    EXPECT_LE(tr.halvingGap, 1e-5);
    EXPECT_NEAR(tr.y.back(), std::sqrt(3.0), 0.02);
}

TEST(Transport, OversizedStepIsRejected) {
    try {
        integrate_char(VelocityField::sinusoidal(2.0, 1.0), 0.01, 0.0, 1.0, 0.01);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
    EXPECT_THROW(VelocityField({1.0, 0.0, 0.0, 0.0, 0}).validate(), Error);
}

TEST(Transport, ConstantFieldSolutionIsATranslation) {
    TransportProblem prob;
    prob.F = VelocityField::constant(0.75);
    prob.epsilon = 0.125;
    prob.phi.kind = TransportDatum::Kind::Sine;
    prob.phi.amplitude = 0.5;
    prob.T = 1.0;
    for (double x : {-0.4, 0.0, 0.33}) EXPECT_NEAR(solve_transport(prob, x), 0.5 * std::sin(kTwoPi * (x - 0.75)), 1e-10);
}

TEST(Transport, RateIsFirstOrderForTentDatum) {
    const TransportDatum tent{TransportDatum::Kind::Tent, 1.0, 1.0, 0.0};
    const TransportRateReport r = transport_rate(VelocityField::sinusoidal(2.0, 1.0), tent, 1.0,
                                                 {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128}, -2.0, 4.0, 1001);
    EXPECT_NEAR(r.xi, std::sqrt(3.0), 1e-9);
    for (std::size_t i = 0; i < r.eps.size(); ++i) EXPECT_LE(r.errors[i], 2.0 * r.eps[i] * tent.lipschitz() + 1e-9);
    EXPECT_TRUE(r.pass) << "slope " << r.slope;
    EXPECT_EQ(r.to_csv().substr(0, r.to_csv().find('\n')), "epsilon,sup_error");
}
