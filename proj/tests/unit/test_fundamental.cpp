#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "hjhomog/fundamental.hpp"

using namespace hjh;

namespace {

GridSpec grid(int ppu, double dt, int substeps = 8, double radius = 1.0) {
    GridSpec g;
    g.ppu = ppu;
    g.dt = dt;
    g.substeps = substeps;
    g.radius = radius;
    return g;
}

// sup |m(T,x) - c - |x-y|^2/2T| over |x - y| <= 1
double closed_form_error(const FundamentalField& f) {
    const auto& v = f.grid.slices.back();
    double err = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec x = f.grid.lattice.node(i);
        const double r = norm(x - f.base);
        if (r > 1.0 + 1e-12) continue;
        err = std::max(err, std::abs(v[i] - f.c - 0.5 * r * r / f.T));
    }
    return err;
}

double sup_gap(const std::vector<double>& a, const std::vector<double>& b, double shift = 0.0) {
    double g = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a[i] + shift - b[i]));
    return g;
}

}  // namespace

TEST(Fundamental, QuadraticFreeMatchesClosedForm) {
    const auto view = LagrangianView::analytic(make_model("quadratic-free", {}, 1));
    const FundamentalField f = solve_m(view, {0.0, 0.0}, 0.0, 1.0, grid(128, 1.0 / 128)).field;
    EXPECT_LE(closed_form_error(f), f.tolerance());
    EXPECT_LE(closed_form_error(f), 0.02);
}

TEST(Fundamental, QuadraticFreeTwoDimensional) {
    const auto view = LagrangianView::analytic(make_model("quadratic-free", {}, 2));
    const FundamentalField f = solve_m(view, {0.0, 0.0}, 0.5, 1.0, grid(32, 1.0 / 32)).field;
    EXPECT_LE(closed_form_error(f), f.tolerance());
}

TEST(Fundamental, RefinementHalvesTheErrorWhenFootPointsAreResolved) {
    // With dt = h the velocity spacing is 1/substeps; 32 substeps keep that
    // term below the interpolation error over the whole refinement.
    const auto view = LagrangianView::analytic(make_model("quadratic-free", {}, 1));
    const double e1 = closed_form_error(solve_m(view, {0.0, 0.0}, 0.0, 1.0, grid(128, 1.0 / 128, 32)).field);
    const double e2 = closed_form_error(solve_m(view, {0.0, 0.0}, 0.0, 1.0, grid(256, 1.0 / 256, 32)).field);
    EXPECT_GE(e1 / e2, 1.7) << e1 << " -> " << e2;
}

TEST(Fundamental, VerticalEquivarianceIsExact) {
    const auto view = LagrangianView::analytic(make_model("sine-gordon", {{"amplitude", 1.0}}, 1));
    const auto g = grid(64, 1.0 / 64);
    const FundamentalField a = solve_m(view, {0.0, 0.0}, 0.3, 0.5, g).field;
    const FundamentalField b = solve_m(view, {0.0, 0.0}, 1.3, 0.5, g).field;
    ASSERT_EQ(a.grid.slices.size(), b.grid.slices.size());
    for (std::size_t k = 0; k < a.grid.slices.size(); ++k)
        EXPECT_LE(sup_gap(a.grid.slices[k], b.grid.slices[k], 1.0), 1e-10);
}

TEST(Fundamental, LatticeEquivarianceIsExact) {
    const auto view = LagrangianView::analytic(make_model("quadratic-potential", {{"amplitude", 0.5}}, 2));
    const auto g = grid(32, 1.0 / 32);
    const FundamentalField a = solve_m(view, {0.25, 0.0}, 0.0, 0.5, g).field;
    const FundamentalField b = solve_m(view, {2.25, -1.0}, 0.0, 0.5, g).field;
    EXPECT_EQ(a.grid.lattice.n, b.grid.lattice.n);
    EXPECT_EQ(b.grid.lattice.origin[0] - a.grid.lattice.origin[0], 2 * 32);
    EXPECT_LE(sup_gap(a.grid.slices.back(), b.grid.slices.back()), 1e-10);
}

TEST(Fundamental, PicardBoundValues) {
    EXPECT_NEAR(double(picard_bound(2.0, 1.0, 15)), std::pow(2.0, 15) / 1307674368000.0, 1e-20);
    EXPECT_NEAR(double(picard_bound(1.0, 1.0, 0)), 1.0, 0.0);
    // The smallest n with 2^n/n! <= 1e-6 is 14.
    int n = 0;
    while (picard_bound(2.0, 1.0, n) > 1e-6L) ++n;
    EXPECT_EQ(n, 14);
}

TEST(Fundamental, PicardConvergesWithinTheoreticalCount) {
    const auto model = make_model("sine-gordon", {{"amplitude", 1.0}}, 1);
    const auto view = LagrangianView::analytic(model);
    const double T = 2.0 / model->K();
    const FundamentalResult r = solve_m(view, {0.0, 0.0}, 0.0, T, grid(32, 1.0 / 64), Scheme::Picard);
    const auto& c = r.certificate;
    ASSERT_TRUE(c.converged);
    EXPECT_LE(c.iterations, 15);
    EXPECT_LE(double(c.theoreticalBound), 1e-6);
    EXPECT_LE(c.empiricalResidual, 1e-5);
    // Residuals contract at least as fast as the factorial bound suggests.
    for (std::size_t n = 0; n < c.residuals.size(); ++n)
        EXPECT_LE(c.residuals[n], double(c.bounds[n]) * 4.0 + 1e-9) << n;

    const FundamentalField m = solve_m(view, {0.0, 0.0}, 0.0, T, grid(32, 1.0 / 64)).field;
    EXPECT_LE(sup_gap(m.grid.slices.back(), r.field.grid.slices.back()), 1e-5 + m.tolerance());
}

TEST(Fundamental, PicardRefusesHugeSpaceTimeFields) {
    const auto view = LagrangianView::analytic(make_model("sine-gordon", {}, 2));
    EXPECT_THROW(solve_m(view, {0.0, 0.0}, 0.0, 4.0, grid(256, 1.0 / 256, 8, 2.0), Scheme::Picard), Error);
}

TEST(Fundamental, ClassicalMetricForQuadraticFree) {
    const auto view = LagrangianView::analytic(make_model("quadratic-free", {}, 1));
    const FundamentalField f = solve_m0(view, {0.0, 0.0}, 0.5, grid(64, 1.0 / 64));
    EXPECT_LE(closed_form_error(f), f.tolerance());
}

TEST(Fundamental, BdmeBoundsHoldAcrossTheZoo) {
    for (const char* name : {"quadratic-free", "quadratic-potential", "sine-gordon", "transport-derived"}) {
        const auto view = LagrangianView::analytic(make_model(name, {}, 1));
        const FundamentalField f = solve_m(view, {0.0, 0.0}, 0.2, 0.5, grid(32, 1.0 / 64)).field;
        const BdmeResult r = bdme_check(f, view, 1.0);
        EXPECT_TRUE(r.pass) << name << " C=" << r.C << " bound=" << r.bound;
    }
}

TEST(Fundamental, SubadditivityDefectsStayBounded) {
    const auto view = LagrangianView::analytic(make_model("sine-gordon", {{"amplitude", 1.0}}, 1));
    std::vector<std::pair<int, int>> pairs;
    for (int s : {1, 2, 4, 8})
        for (int l : {1, 2, 4, 8}) pairs.push_back({s, l});
    const SubadditivityReport r = subadditivity_probe(view, {0.25, 0.0}, 0.0, 1.0, pairs, grid(16, 1.0 / 16));
    EXPECT_TRUE(r.pass) << "sub slope " << r.subSlope << " sup slope " << r.supSlope;
    EXPECT_TRUE(std::isfinite(r.fittedC));
    EXPECT_EQ(r.sub.size(), 16u);
    EXPECT_EQ(r.sup.size(), 4u);
}

TEST(Fundamental, BinaryRoundTripIsLossless) {
    const auto view = LagrangianView::analytic(make_model("sine-gordon", {}, 2));
    GridSpec g = grid(16, 1.0 / 16);
    g.storeEvery = 4;
    const FundamentalField f = solve_m(view, {0.5, 0.25}, 0.1, 0.5, g).field;
    const auto path = (std::filesystem::temp_directory_path() / "hjhomog_field_roundtrip.bin").string();
    write_field_binary(f, path);
    const FundamentalField r = read_field_binary(path);
    std::filesystem::remove(path);
    EXPECT_EQ(r.grid.lattice.n, f.grid.lattice.n);
    EXPECT_EQ(r.grid.lattice.origin, f.grid.lattice.origin);
    EXPECT_EQ(r.grid.times, f.grid.times);
    EXPECT_EQ(r.grid.slices, f.grid.slices);
    EXPECT_EQ(r.base, f.base);
    EXPECT_EQ(r.c, f.c);
}

TEST(Fundamental, ValueRejectsPointsOutsideTheBox) {
    const auto view = LagrangianView::analytic(make_model("quadratic-free", {}, 1));
    const FundamentalField f = solve_m(view, {0.0, 0.0}, 0.0, 0.5, grid(32, 1.0 / 32)).field;
    EXPECT_NO_THROW(f.value(0.5, {0.3, 0.0}));
    EXPECT_THROW(f.value(0.5, {9.0, 0.0}), Error);
    EXPECT_THROW(f.value(0.123, {0.0, 0.0}), Error);
}

TEST(Fundamental, StencilGuardCatchesTruncatedVelocities) {
    const auto view = LagrangianView::analytic(make_model("quadratic-free", {}, 1));
    GridSpec g = grid(32, 1.0 / 32);
    g.vmax = 0.25;
    try {
        solve_m(view, {0.0, 0.0}, 0.0, 1.0, g);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Numeric);
    }
}
