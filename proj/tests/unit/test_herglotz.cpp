#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hjhomog/fundamental.hpp"
#include "hjhomog/herglotz.hpp"

using namespace hjh;

namespace {

// Solution of xi' = cos(2 pi xi), xi(0) = 0: xi = gd(2 pi t) / (2 pi).
double gudermann_xi(double t) { return 2.0 * std::atan(std::tanh(0.5 * kTwoPi * t)) / kTwoPi; }

}  // namespace

TEST(Herglotz, StraightLineInQuadraticFreeIsExact) {
    const auto view = LagrangianView::analytic(make_model("quadratic-free", {}, 2));
    const Curve c = straight_curve(2, {0.0, 0.0}, {0.6, -0.8}, 2.0);
    const HerglotzPath p = integrate_xi(view, c, 0.25);
    EXPECT_NEAR(p.final_value(), 0.25 + 0.5 * 0.25 * 2.0, 1e-12);
}

TEST(Herglotz, RestingCurveFollowsGudermannian) {
    const auto view = LagrangianView::analytic(make_model("sine-gordon", {{"amplitude", 1.0}}, 1));
    const Curve c = straight_curve(1, {0.3, 0.0}, {0.3, 0.0}, 1.0);
    const HerglotzPath p = integrate_xi(view, c, 0.0, 1.0 / 512);
    for (std::size_t k = 0; k < p.times.size(); k += 37) EXPECT_NEAR(p.xi[k], gudermann_xi(p.times[k]), 1e-9);
    EXPECT_NEAR(p.final_value(), gudermann_xi(1.0), 1e-9);
    EXPECT_TRUE(p.certified);
}

TEST(Herglotz, CurveValidationAndCsvRoundTrip) {
    Curve bad;
    bad.dim = 1;
    bad.t = {0.0, 0.5, 0.5};
    bad.x = {{0, 0}, {1, 0}, {2, 0}};
    EXPECT_THROW(validate_curve(bad), Error);

    Curve c;
    c.dim = 2;
    c.t = {0.0, 0.25, 1.0};
    c.x = {{0.0, 0.0}, {0.1, -0.2}, {0.5, 0.5}};
    const Curve r = curve_from_csv(curve_to_csv(c));
    EXPECT_EQ(r.t, c.t);
    EXPECT_EQ(r.x, c.x);
    EXPECT_NEAR(c.position(0.125)[1], -0.1, 1e-15);
    EXPECT_NEAR(c.max_speed(), std::hypot(0.4, 0.7) / 0.75, 1e-12);
}

TEST(Herglotz, FundamentalSolutionIsDominatedByRandomCurves) {
    for (const char* name : {"quadratic-potential", "sine-gordon", "transport-derived"}) {
        const auto view = LagrangianView::analytic(make_model(name, {}, 1));
        GridSpec g;
        g.ppu = 64;
        g.dt = 1.0 / 64;
        g.radius = 1.0;
        const double T = 0.5;
        const FundamentalField f = solve_m(view, {0.0, 0.0}, 0.1, T, g).field;
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> U(-0.4, 0.4);
        for (int k = 0; k < 25; ++k) {
            Curve c;
            c.dim = 1;
            c.t = {0.0, 0.25, T};
            c.x = {{0.0, 0.0}, {U(rng), 0.0}, {U(rng), 0.0}};
            const UpperBoundResult r = upper_bound_check(f, integrate_xi(view, c, 0.1), 3.0 * f.tolerance());
            EXPECT_TRUE(r.pass) << name << " margin " << r.margin;
        }
    }
}

TEST(Herglotz, CheckRejectsMismatchedStart) {
    const auto view = LagrangianView::analytic(make_model("quadratic-free", {}, 1));
    GridSpec g;
    g.ppu = 32;
    g.dt = 1.0 / 32;
    const FundamentalField f = solve_m(view, {0.0, 0.0}, 0.0, 0.5, g).field;
    const HerglotzPath p = integrate_xi(view, straight_curve(1, {0.2, 0.0}, {0.3, 0.0}, 0.5), 0.0);
    EXPECT_THROW(upper_bound_check(f, p, 0.1), Error);
}
