#include <gtest/gtest.h>

#include <cmath>

#include "hjhomog/effective.hpp"

using namespace hjh;

namespace {

GridSpec table_grid(int ppu = 32, double dt = 1.0 / 32) {
    GridSpec g;
    g.ppu = ppu;
    g.dt = dt;
    g.substeps = 8;
    return g;
}

}  // namespace

TEST(Effective, LogLogFitRecoversPowerLaw) {
    const std::vector<double> eps{0.5, 0.25, 0.125, 0.0625};
    std::vector<double> err;
    for (double e : eps) err.push_back(3.0 * std::pow(e, 1.5));
    const auto [slope, intercept] = loglog_fit(eps, err);
    EXPECT_NEAR(slope, 1.5, 1e-12);
    EXPECT_NEAR(intercept, std::log(3.0), 1e-12);
}

TEST(Effective, QuadraticFreeTableIsExact) {
    const auto view = LagrangianView::analytic(make_model("quadratic-free", {}, 1));
    EffectiveTable t = estimate_Lbar(view, uniform_axis(-2.0, 2.0, 0.25), {1.0 / 8, 1.0 / 16}, table_grid());
    for (std::size_t i = 0; i < t.Lbar.size(); ++i) {
        const double v = t.Lbar.axis[0][i];
        EXPECT_NEAR(t.Lbar.values[i], 0.5 * v * v, t.schemeTolerance + 1e-9) << v;
    }
    estimate_Hbar(t, uniform_axis(-1.0, 1.0, 0.25));
    for (double p : {-1.0, -0.5, 0.0, 0.75}) EXPECT_NEAR(t.Hbar_at({p, 0.0}), 0.5 * p * p, 0.02) << p;
    EXPECT_LE(convexity_defect(t), t.schemeTolerance + 1e-9);
    EXPECT_LE(superlinearity_defect(t), t.schemeTolerance + 1e-9);
}

TEST(Effective, SineGordonMatchesFlatPieceAndGrowth) {
    // Lbar vanishes where the fast oscillation can be parked at the zero of H;
    // away from it the table is convex and even.
    const auto view = LagrangianView::analytic(make_model("sine-gordon", {{"amplitude", 1.0}}, 1));
    EffectiveTable t =
        estimate_Lbar(view, uniform_axis(-3.0, 3.0, 0.25), {1.0 / 16, 1.0 / 32}, table_grid());
    const std::size_t n = t.Lbar.size();
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(t.Lbar.values[i], t.Lbar.values[n - 1 - i], 1e-9);
    EXPECT_LE(convexity_defect(t), t.schemeTolerance + 1e-6);
    EXPECT_NEAR(t.Lbar_at({0.0, 0.0}), 0.0, 0.02);
    estimate_Hbar(t, uniform_axis(-1.0, 1.0, 0.25));
    EXPECT_NEAR(t.Hbar_at({0.0, 0.0}), 0.0, 0.02);
}

TEST(Effective, HopfLaxWithAffineDatum) {
    const auto view = LagrangianView::analytic(make_model("quadratic-free", {}, 1));
    const EffectiveTable t =
        estimate_Lbar(view, uniform_axis(-2.0, 2.0, 0.125), {1.0 / 8, 1.0 / 16}, table_grid());
    const InitialDatum phi = InitialDatum::affine({0.5, 0.0});
    for (double x : {0.0, 0.25, 0.8}) {
        const HopfLaxValue v = hopf_lax(phi, t, {x, 0.0}, 1.0);
        EXPECT_NEAR(v.value, 0.5 * x - 0.125, 5e-3);
        EXPECT_NEAR(v.argmin[0], x - 0.5, 0.05);
    }
}

TEST(Effective, TableLookupOutsideGridIsDomainError) {
    const auto view = LagrangianView::analytic(make_model("quadratic-free", {}, 1));
    const EffectiveTable t = estimate_Lbar(view, uniform_axis(-1.0, 1.0, 0.25), {1.0 / 8, 1.0 / 16}, table_grid());
    try {
        t.Lbar_at({5.0, 0.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Domain);
    }
}

TEST(Effective, CsvHeaders) {
    const auto view = LagrangianView::analytic(make_model("quadratic-free", {}, 1));
    EffectiveTable t = estimate_Lbar(view, uniform_axis(-1.0, 1.0, 0.5), {1.0 / 8, 1.0 / 16}, table_grid());
    estimate_Hbar(t, {0.0, 0.5});
    EXPECT_EQ(t.Lbar_csv().substr(0, t.Lbar_csv().find('\n')), "v,Lbar,gap");
    EXPECT_EQ(t.Hbar_csv().substr(0, t.Hbar_csv().find('\n')), "p,Hbar,flag");
}

TEST(Effective, RateSweepOnQuadraticFreeHasNoHomogenizationError) {
    // x-independent H: u^eps equals the Hopf-Lax solution, so errors are
    // discretization-only and the controls have nothing to detect.
    const auto view = LagrangianView::analytic(make_model("quadratic-free", {}, 1));
    RateOptions o;
    o.phi = InitialDatum::sinusoid(0.2);
    o.T = 0.5;
    o.epsList = {0.25, 0.125};
    o.grid.ppc = 16;
    o.grid.dtau = 1.0 / 16;
    o.control = false;
    const RateReport r = rate_experiment(view, o);
    ASSERT_EQ(r.errors.size(), 2u);
    for (double e : r.errors) EXPECT_LE(e, 0.03);
    EXPECT_TRUE(r.valid);
    EXPECT_NE(r.to_json().find("\"slope\""), std::string::npos);
}
