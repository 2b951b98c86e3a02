#include <gtest/gtest.h>

#include <cmath>

#include "hjhomog/corrector.hpp"

using namespace hjh;

namespace {

CellGrid grid(int ppc = 32, double dtau = 1.0 / 32) {
    CellGrid g;
    g.ppc = ppc;
    g.dtau = dtau;
    g.storeDtau = 0.125;
    return g;
}

const CellDatum kZero = [](const Vec&) { return 0.0; };

LagrangianView view_of(const char* name, int dim = 1) { return LagrangianView::analytic(make_model(name, {}, dim)); }

}  // namespace

TEST(Corrector, QuadraticFreeHasZeroCorrector) {
    const CellRun run = solve_cell(view_of("quadratic-free"), Vec{0.5, 0.0}, kZero, 20.0, grid());
    EXPECT_EQ(run.cell, 2);
    const DriftEstimate d = extract_Hbar_drift(run);
    EXPECT_NEAR(d.value, 0.125, 1e-9);
    const CorrectorField c = corrector_extract(run, d.value);
    EXPECT_LE(c.C, 1e-9);
    EXPECT_TRUE(c.bounded);
}

TEST(Corrector, SineGordonAtZeroSlopeSettlesOnTheStableZero) {
    // w' = cos(2 pi w) drives w to 1/4, so Hbar(0) = 0 and sup|v| = 1/4.
    const CellRun run = solve_cell(view_of("sine-gordon"), Vec{0.0, 0.0}, kZero, 50.0, grid());
    const DriftEstimate d = extract_Hbar_drift(run);
    EXPECT_NEAR(d.value, 0.0, 1e-6);
    const CorrectorField c = corrector_extract(run, d.value);
    EXPECT_NEAR(c.C, 0.25, 1e-3);
    EXPECT_TRUE(c.bounded);

    const CellRun longer = solve_cell(view_of("sine-gordon"), Vec{0.0, 0.0}, kZero, 100.0, grid());
    const CorrectorField c2 = corrector_extract(longer, extract_Hbar_drift(longer).value);
    EXPECT_LT(std::abs(c2.C - c.C), 1e-2);
}

TEST(Corrector, TransportDerivedDriftIsMinusTheHarmonicSpeed) {
    // w' = F(w) with F = 2 + sin: w advances at sqrt(3), so Hbar(0) = -sqrt(3).
    const CellRun run = solve_cell(view_of("transport-derived"), Vec{0.0, 0.0}, kZero, 60.0, grid());
    const DriftEstimate d = extract_Hbar_drift(run);
    EXPECT_NEAR(d.value, -std::sqrt(3.0), 0.02);
    EXPECT_TRUE(corrector_extract(run, d.value).bounded);
}

TEST(Corrector, QuadraticPotentialHasAFlatPiece) {
    // For |p| below 4/pi the effective Hamiltonian equals max V = 1.
    const CellRun run = solve_cell(view_of("quadratic-potential"), Vec{0.5, 0.0}, kZero, 60.0, grid());
    const DriftEstimate d = extract_Hbar_drift(run);
    EXPECT_NEAR(d.value, 1.0, 0.02);
    EXPECT_TRUE(corrector_extract(run, d.value).bounded);
}

TEST(Corrector, BoundedAcrossTheZoo) {
    for (const char* name : {"quadratic-free", "quadratic-potential", "sine-gordon", "transport-derived"})
        for (double p : {0.0, 0.5, 1.0}) {
            const CellRun run = solve_cell(view_of(name), Vec{p, 0.0}, kZero, 40.0, grid());
            const DriftEstimate d = extract_Hbar_drift(run);
            EXPECT_FALSE(d.flagged) << name << " p=" << p;
            EXPECT_TRUE(corrector_extract(run, d.value, 2e-2).bounded) << name << " p=" << p;
        }
}

TEST(Corrector, InitialDatumSandwich) {
    // H is 1-periodic in r: runs from w0 and from 0 stay within N = ceil(|w0|) of each other.
    const CellDatum w0 = [](const Vec& y) { return 0.7 * std::sin(kTwoPi * y[0]); };
    const CellRun a = solve_cell(view_of("sine-gordon"), Vec{0.0, 0.0}, kZero, 20.0, grid());
    const CellRun b = solve_cell(view_of("sine-gordon"), Vec{0.0, 0.0}, w0, 20.0, grid());
    for (std::size_t k = 0; k < a.w.slices.size(); ++k)
        for (std::size_t i = 0; i < a.w.slices[k].size(); ++i)
            EXPECT_LE(std::abs(a.w.slices[k][i] - b.w.slices[k][i]), 1.0 + 1e-12);
}

TEST(Corrector, RationalSlopeSetsTheCell) {
    const CellRun run = solve_cell(view_of("quadratic-free"), Vec{1.0 / 3.0, 0.0}, kZero, 2.0, grid());
    EXPECT_EQ(run.cell, 3);
    EXPECT_EQ(run.p[0].str(), "1/3");
    const CellRun r2 = solve_cell(view_of("quadratic-free", 2), Vec{0.5, 0.25}, kZero, 1.0, grid(16, 1.0 / 16));
    EXPECT_EQ(r2.cell, 4);
}

TEST(Corrector, IrrationalSlopeIsUnsupported) {
    try {
        solve_cell(view_of("quadratic-free"), Vec{std::sqrt(2.0) - 1.0, 0.0}, kZero, 1.0, grid());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Unsupported);
        EXPECT_NE(std::string(e.what()).find("rational"), std::string::npos);
    }
}

TEST(Corrector, InfSupMembershipAndNegativeControl) {
    for (const char* name : {"quadratic-free", "sine-gordon"}) {
        CellGrid g = grid(64, 1.0 / 64);
        g.storeDtau = g.dtau;
        const auto view = view_of(name);
        const CellRun run = solve_cell(view, Vec{0.0, 0.0}, kZero, 10.0, g);
        const double Hbar = extract_Hbar_drift(run).value;
        const CorrectorField c = corrector_extract(run, Hbar);
        const InfSupResult at = inf_sup_probe(c, *view.model(), Hbar, 0.05);
        EXPECT_TRUE(at.pass) << name << " margin " << at.margin;
        EXPECT_LE(at.margin, 0.05);
        const InfSupResult wrong = inf_sup_probe(c, *view.model(), Hbar - 0.2, 0.05);
        EXPECT_FALSE(wrong.pass) << name;
        EXPECT_GT(wrong.margin, 0.1) << name;
    }
}

TEST(Corrector, SummaryJsonCarriesRationalSlope) {
    const CellRun run = solve_cell(view_of("quadratic-free"), Vec{0.5, 0.0}, kZero, 8.0, grid());
    const DriftEstimate d = extract_Hbar_drift(run);
    const std::string s = cell_summary_json(run, d, corrector_extract(run, d.value));
    EXPECT_NE(s.find("\"1/2\""), std::string::npos);
    EXPECT_NE(s.find("\"Hbar\""), std::string::npos);
}
