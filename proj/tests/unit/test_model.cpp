#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hjhomog/model.hpp"

using namespace hjh;

namespace {

const std::vector<std::string> kZoo{"quadratic-free", "quadratic-potential", "sine-gordon",
                                    "dislocation",    "transport-derived",   "custom-analytic"};

// Independent conjugate: brute-force sup over a fine momentum grid.
double brute_L(const HamiltonianModel& m, const Vec& y, double r, double v) {
    double best = -1e300;
    for (int i = -60000; i <= 60000; ++i) {
        const double p = i * 5e-4;
        best = std::max(best, p * v - m.H(y, r, {p, 0.0}));
    }
    return best;
}

}  // namespace

TEST(Model, ListIncludesRequiredFamilies) {
    const auto names = list_models();
    for (const char* n : {"quadratic-free", "sine-gordon", "dislocation", "transport-derived"})
        EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
}

TEST(Model, DescribeDislocationStatesSpeedConstraint) {
    const std::string d = describe_model("dislocation");
    EXPECT_NE(d.find("c(y) > 1/2"), std::string::npos);
    EXPECT_NE(d.find("E(r)"), std::string::npos);
}

TEST(Model, UnknownNameAndParameterAreConfigErrors) {
    try {
        make_model("no-such-model", {}, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Config);
    }
    try {
        make_model("sine-gordon", {{"amplitud", 1.0}}, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Config);
        EXPECT_NE(std::string(e.what()).find("amplitud"), std::string::npos);
    }
    EXPECT_THROW(describe_model("no-such-model"), Error);
}

TEST(Model, DislocationRejectsSlowFronts) {
    EXPECT_THROW(make_model("dislocation", {{"c0", 0.6}, {"c1", 0.2}}, 1), Error);
    EXPECT_NO_THROW(make_model("dislocation", {{"c0", 0.75}, {"c1", 0.2}}, 1));
}

TEST(Model, ClosedFormsOfSimpleFamilies) {
    const auto qf = make_model("quadratic-free", {}, 2);
    EXPECT_DOUBLE_EQ(qf->H({0.3, 0.1}, 0.7, {1.0, 2.0}), 2.5);
    EXPECT_DOUBLE_EQ(qf->L({0.3, 0.1}, 0.7, {1.0, 2.0}), 2.5);
    const auto sg = make_model("sine-gordon", {{"amplitude", 1.0}}, 1);
    EXPECT_NEAR(sg->H({0.0, 0.0}, 0.25, {0.0, 0.0}), 0.0, 1e-15);
    EXPECT_NEAR(sg->H({0.4, 0.0}, 0.0, {1.0, 0.0}), -0.5, 1e-15);
    // K carries a 5% margin over the exact r-Lipschitz constant 2 pi amplitude.
    EXPECT_NEAR(sg->K(), 1.05 * kTwoPi, 1e-6);
    EXPECT_GE(sg->K_sampled(), 0.99 * kTwoPi);
}

TEST(Model, PeriodicInPositionAndValue) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (const auto& name : kZoo) {
        const auto m = make_model(name, {}, 1);
        for (int i = 0; i < 200; ++i) {
            const Vec y{U(rng), 0.0}, p{U(rng), 0.0};
            const double r = U(rng);
            const double h = m->H(y, r, p);
            EXPECT_NEAR(m->H({y[0] + 1.0, 0.0}, r, p), h, 1e-9 * (1 + std::abs(h))) << name;
            EXPECT_NEAR(m->H(y, r + 1.0, p), h, 1e-9 * (1 + std::abs(h))) << name;
        }
    }
}

TEST(Model, LipschitzInValueBoundedByK) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    for (const auto& name : kZoo) {
        const auto m = make_model(name, {}, 1);
        for (int i = 0; i < 500; ++i) {
            const Vec y{U(rng), 0.0}, p{U(rng), 0.0};
            const double r1 = U(rng), r2 = r1 + 1e-3 * U(rng);
            EXPECT_LE(std::abs(m->H(y, r1, p) - m->H(y, r2, p)), m->K() * std::abs(r1 - r2) * (1 + 1e-6) + 1e-12)
                << name;
        }
    }
}

TEST(Model, ClosedFormDualMatchesBruteForceConjugate) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (const auto& name : kZoo) {
        const auto m = make_model(name, {}, 1);
        for (int i = 0; i < 6; ++i) {
            const Vec y{U(rng), 0.0};
            const double r = U(rng), v = 2.5 * U(rng);
            EXPECT_NEAR(m->L(y, r, {v, 0.0}), brute_L(*m, y, r, v), 2e-5) << name << " v=" << v;
        }
    }
}

TEST(Model, FenchelYoungInequality) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (const auto& name : kZoo) {
        const auto m = make_model(name, {}, 2);
        for (int i = 0; i < 400; ++i) {
            const Vec y{U(rng), U(rng)}, p{U(rng), U(rng)}, v{U(rng), U(rng)};
            const double r = U(rng);
            EXPECT_GE(m->H(y, r, p) + m->L(y, r, v) - dot(p, v), -1e-9) << name;
        }
    }
}

TEST(Model, AssumptionsHoldOnEveryZooModel) {
    for (const auto& name : kZoo) {
        const auto m = make_model(name, {}, 1);
        const AssumptionReport r = verify_assumptions(*m, 1500, 1e-9);
        EXPECT_TRUE(r.pass) << r.to_json();
    }
}

TEST(Model, StaircaseInverseRoundTrip) {
    StaircaseSmoother s;
    s.delta = 0.1;
    for (double u = -3.0; u <= 3.0; u += 0.0137) {
        const double r = s.invert(u);
        EXPECT_NEAR(s.eval(r), u, 1e-12);
        EXPECT_GT(s.derivative(r), 0.0);
    }
    EXPECT_NEAR(s.eval(2.0), 2.0, 1e-15);  // fixes the integers
}

TEST(Model, DigestTracksParameters) {
    const auto a = make_model("sine-gordon", {{"amplitude", 1.0}}, 1);
    const auto b = make_model("sine-gordon", {{"amplitude", 1.0}}, 1);
    const auto c = make_model("sine-gordon", {{"amplitude", 0.5}}, 1);
    EXPECT_EQ(a->digest(), b->digest());
    EXPECT_NE(a->digest(), c->digest());
}

TEST(Model, TabulatedViewAgreesWithAnalyticDual) {
    const auto m = make_model("sine-gordon", {{"amplitude", 1.0}}, 1);
    const auto tab = LagrangianView::tabulated(m, 6.0, 4001);
    const auto ana = LagrangianView::analytic(m);
    for (double v = -2.0; v <= 2.0; v += 0.25)
        EXPECT_NEAR(tab.L({0.2, 0.0}, 0.3, {v, 0.0}), ana.L({0.2, 0.0}, 0.3, {v, 0.0}), 1e-4);
}
