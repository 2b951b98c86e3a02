#include <gtest/gtest.h>

#include <cmath>

#include "hjhomog/regularity.hpp"

using namespace hjh;

namespace {

GridField sine_field(double amplitude) {
    GridField f;
    f.lattice = periodic_lattice(1, 64, {1, 1});
    f.times = {1.0, 1.5, 2.0};
    std::vector<double> s;
    for (std::size_t i = 0; i < f.lattice.size(); ++i) s.push_back(amplitude * std::sin(kTwoPi * f.lattice.node(i)[0]));
    f.slices.assign(3, s);
    return f;
}

}  // namespace

TEST(Regularity, QuadraticGrowthGivesTwoThirdsAndOneHalf) {
    const HolderSpec s = holder_spec(2.0, 2.0);
    ASSERT_TRUE(s.exact);
    EXPECT_EQ(s.xExponentExact.str(), "2/3");
    EXPECT_EQ(s.tExponentExact.str(), "1/2");
    EXPECT_DOUBLE_EQ(s.xExponent, 2.0 / 3.0);
}

TEST(Regularity, MixedGrowthExponents) {
    const HolderSpec s = holder_spec(2.0, 3.0);
    ASSERT_TRUE(s.exact);
    EXPECT_EQ(s.m1.str(), "3/2");
    EXPECT_EQ(s.m2.str(), "2");
    EXPECT_EQ(s.xExponentExact.str(), "3/5");
    EXPECT_EQ(s.tExponentExact.str(), "3/7");
}

TEST(Regularity, ExponentsFromModel) {
    const auto m = make_model("custom-analytic", {{"q", 4.0}}, 1);
    const HolderSpec s = holder_spec(*m);
    // m1 = m2 = 4/3
    EXPECT_EQ(s.xExponentExact.str(), "4/5");
    EXPECT_EQ(s.tExponentExact.str(), "1/2");
}

TEST(Regularity, InvalidGrowthIsAConfigError) {
    for (auto [q1, q2] : {std::pair{1.0, 2.0}, std::pair{3.0, 2.0}, std::pair{std::nan(""), 2.0}}) {
        try {
            holder_spec(q1, q2);
            FAIL() << q1 << " " << q2;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::Config);
        }
    }
}

TEST(Regularity, HaltonRadicalInverse) {
    EXPECT_DOUBLE_EQ(halton(1, 0), 0.5);
    EXPECT_DOUBLE_EQ(halton(3, 0), 0.75);
    EXPECT_DOUBLE_EQ(halton(1, 1), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(halton(5, 1), 7.0 / 9.0);
    EXPECT_THROW(halton(1, 99), Error);
}

TEST(Regularity, ModulusOfSineRespectsTheAnalyticBound) {
    // |sin a - sin b| <= min(2 pi d, 2), and min(2 pi d, 2) / d^(2/3) peaks at 2 pi^(2/3).
    const HolderSpec s = holder_spec(2.0, 2.0);
    ModulusOptions o;
    o.pairs = 3000;
    const ModulusResult r = measure_modulus(sine_field(1.0), Vec{0.0, 0.0}, s, o);
    EXPECT_GT(r.C, 0.5);
    EXPECT_LE(r.C, 2.0 * std::pow(M_PI, 2.0 / 3.0) + 1e-9);
    EXPECT_TRUE(std::isfinite(r.xFit));
    EXPECT_EQ(r.pairs, 3000u);
}

TEST(Regularity, ModulusScalesLinearly) {
    const HolderSpec s = holder_spec(2.0, 2.0);
    ModulusOptions o;
    o.pairs = 1200;
    const double c1 = measure_modulus(sine_field(1.0), Vec{0.0, 0.0}, s, o).C;
    const double c2 = measure_modulus(sine_field(2.0), Vec{0.0, 0.0}, s, o).C;
    EXPECT_NEAR(c2, 2.0 * c1, 1e-12 * c2);
}

TEST(Regularity, ReferenceConstantCountsViolations) {
    const HolderSpec s = holder_spec(2.0, 2.0);
    ModulusOptions o;
    o.pairs = 600;
    const ModulusResult base = measure_modulus(sine_field(1.0), Vec{0.0, 0.0}, s, o);
    o.Cref = 0.5 * base.C;
    EXPECT_GT(measure_modulus(sine_field(1.0), Vec{0.0, 0.0}, s, o).violations, 0u);
    o.Cref = base.C;
    EXPECT_EQ(measure_modulus(sine_field(1.0), Vec{0.0, 0.0}, s, o).violations, 0u);
}

TEST(Regularity, EmptyTimeWindowIsRejected) {
    ModulusOptions o;
    o.tMin = 5.0;
    EXPECT_THROW(measure_modulus(sine_field(1.0), Vec{0.0, 0.0}, holder_spec(2.0, 2.0), o), Error);
}
