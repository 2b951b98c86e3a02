#include <gtest/gtest.h>

#include <cmath>

#include "hjhomog/legendre.hpp"
#include "hjhomog/rational.hpp"

using namespace hjh;

TEST(Legendre, UniformAxisHitsEndpoints) {
    const auto a = uniform_axis(-1.0, 1.0, 0.25);
    ASSERT_EQ(a.size(), 9u);
    EXPECT_DOUBLE_EQ(a.front(), -1.0);
    EXPECT_DOUBLE_EQ(a.back(), 1.0);
    EXPECT_DOUBLE_EQ(a[4], 0.0);
}

TEST(Legendre, QuadraticIsSelfDual) {
    const auto x = uniform_axis(-3.0, 3.0, 0.01);
    std::vector<double> f;
    for (double v : x) f.push_back(0.5 * v * v);
    const auto p = uniform_axis(-2.0, 2.0, 0.1);
    const LegendreResult r = legendre_transform(x, f, p);
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_NEAR(r.values[i], 0.5 * p[i] * p[i], 1e-10);
        EXPECT_FALSE(r.unattained[i]);
    }
}

TEST(Legendre, QuarticDualHasConjugateExponent) {
    // (|x|^4/4)* = |p|^{4/3} / (4/3)
    const auto x = uniform_axis(-3.0, 3.0, 0.002);
    std::vector<double> f;
    for (double v : x) f.push_back(std::pow(std::abs(v), 4.0) / 4.0);
    const std::vector<double> p{-2.0, -0.5, 0.0, 0.7, 1.9};
    const LegendreResult r = legendre_transform(x, f, p);
    for (std::size_t i = 0; i < p.size(); ++i)
        EXPECT_NEAR(r.values[i], 0.75 * std::pow(std::abs(p[i]), 4.0 / 3.0), 1e-6);
}

TEST(Legendre, BoundaryMaximizerIsFlagged) {
    const auto x = uniform_axis(-1.0, 1.0, 0.125);
    std::vector<double> f;
    for (double v : x) f.push_back(0.5 * v * v);
    const LegendreResult r = legendre_transform(x, f, {3.0});
    EXPECT_TRUE(r.unattained[0]);
    EXPECT_EQ(r.flagged(), 1u);
}

TEST(Legendre, TwoDimensionalSeparableSum) {
    SampleGrid g;
    g.dim = 2;
    g.axis[0] = uniform_axis(-2.0, 2.0, 0.05);
    g.axis[1] = uniform_axis(-2.0, 2.0, 0.05);
    for (std::size_t j = 0; j < g.n(1); ++j)
        for (std::size_t i = 0; i < g.n(0); ++i)
            g.values.push_back(0.5 * g.axis[0][i] * g.axis[0][i] + std::pow(g.axis[1][j], 4.0) / 4.0);
    const std::vector<Vec> slopes{Vec{0.5, 0.3}, Vec{-1.0, -0.9}};
    const LegendreResult r = legendre_transform(g, slopes);
    for (std::size_t k = 0; k < slopes.size(); ++k) {
        const double exact = 0.5 * slopes[k][0] * slopes[k][0] + 0.75 * std::pow(std::abs(slopes[k][1]), 4.0 / 3.0);
        EXPECT_NEAR(r.values[k], exact, 1e-4);
    }
}

TEST(Legendre, KinkedDataStaysWithinOneCell) {
    // (|x|)* is the indicator of [-1, 1]; refinement near the kink errs by O(h).
    const double h = 0.05;
    const auto x = uniform_axis(-2.0, 2.0, h);
    std::vector<double> f;
    for (double v : x) f.push_back(std::abs(v));
    const LegendreResult r = legendre_transform(x, f, {-0.9, 0.3, 0.0});
    for (double v : r.values) {
        EXPECT_GE(v, -1e-12);
        EXPECT_LE(v, h);
    }
}

TEST(Legendre, ConjugateIsConvexOnRandomData) {
    std::vector<double> x = uniform_axis(-2.0, 2.0, 0.05), f;
    for (double v : x) f.push_back(std::sin(3.0 * v) + v * v);
    const auto p = uniform_axis(-3.0, 3.0, 0.05);
    const LegendreResult r = legendre_transform(x, f, p);
    for (std::size_t i = 1; i + 1 < p.size(); ++i)
        EXPECT_LE(r.values[i], 0.5 * (r.values[i - 1] + r.values[i + 1]) + 1e-12);
}

TEST(Rational, ArithmeticAndNormalization) {
    const Rational a(6, -8);
    EXPECT_EQ(a.num(), -3);
    EXPECT_EQ(a.den(), 4);
    EXPECT_EQ((Rational(1, 3) + Rational(1, 6)).str(), "1/2");
    EXPECT_EQ((Rational(2, 3) * Rational(3, 2)).str(), "1");
    EXPECT_EQ((Rational(1) / Rational(3)).str(), "1/3");
    EXPECT_TRUE(Rational(1, 3) < Rational(1, 2));
    EXPECT_THROW(Rational(1) / Rational(0), Error);
}

TEST(Rational, FromDoubleFindsSmallDenominators) {
    EXPECT_EQ(Rational::from_double(0.5, 8).str(), "1/2");
    EXPECT_EQ(Rational::from_double(1.0 / 3.0, 8).str(), "1/3");
    EXPECT_EQ(Rational::from_double(-0.625, 8).str(), "-5/8");
    try {
        Rational::from_double(std::sqrt(2.0) / 2.0, 8);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Unsupported);
        EXPECT_NE(std::string(e.what()).find("rational"), std::string::npos);
    }
}
