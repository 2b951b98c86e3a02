#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "hjhomog/lattice.hpp"
#include "hjhomog/model.hpp"
#include "hjhomog/rational.hpp"

namespace hjh {

struct CellGrid {
    int ppc = 64;
    double dtau = 1.0 / 64;
    int substeps = 8;
    double vmax = 0.0;         // 0 selects the model default for slope |p|
    double storeDtau = 0.125;  // spacing of stored slices
};

using CellDatum = std::function<double(const Vec&)>;

/// w(y, tau) for w_tau + H(y, p.y + w, p + D_y w) = 0 on the periodic cell
/// of side q, the least common denominator of p.
struct CellRun {
    int dim = 1;
    std::array<Rational, kMaxDim> p{};
    Vec pv{0.0, 0.0};
    int cell = 1;
    double tauMax = 0.0;
    double dtau = 0.0;
    double dv = 0.0;
    GridField w;
    std::size_t guardCounted = 0, guardBoundary = 0;
};

CellRun solve_cell(const LagrangianView& view, const std::array<Rational, kMaxDim>& p, const CellDatum& w0,
                   double tauMax, const CellGrid& grid);
/// Converts p to fractions with denominator <= maxDen; irrational (or
/// high-denominator) slopes raise Unsupported.
CellRun solve_cell(const LagrangianView& view, const Vec& p, const CellDatum& w0, double tauMax,
                   const CellGrid& grid, std::int64_t maxDen = 8);

struct DriftEstimate {
    double value = 0.0;
    double lo = 0.0, hi = 0.0;  // spread over y-statistics and window halves
    bool flagged = false;       // interval wider than 0.1
};

/// -d/dtau of w fitted over the second half of the run.
DriftEstimate extract_Hbar_drift(const CellRun& run);

struct CorrectorField {
    Vec p{0.0, 0.0};
    double Hbar = 0.0;
    GridField v;  // w + Hbar tau
    std::vector<double> oscillation;
    std::vector<double> supAbs;
    double C = 0.0;           // sup |v| over the run
    double growthRate = 0.0;  // slope of sup|v| over the second half
    bool bounded = false;
};

CorrectorField corrector_extract(const CellRun& run, double Hbar, double tol = 1e-2);

struct InfSupResult {
    double c = 0.0;
    double margin = 0.0;       // largest residual of the subsolution inequality
    double kinkFraction = 0.0; // share of space-time nodes skipped as kinks
    bool pass = false;
};

/// Largest value of v_tau + H(y, p.y + v - c tau, p + Dv) - c over smooth
/// interior slices with tau >= tauFrom. Derivatives are central differences;
/// a node counts as a kink when its one-sided differences in space or time
/// differ by more than kinkThreshold (times the slope scale 1 + |p|). For
/// convex H an almost-everywhere subsolution is a viscosity subsolution, so
/// kinks carry no extra information. Meaningful margins need a field stored
/// at every time step.
InfSupResult inf_sup_probe(const CorrectorField& field, const HamiltonianModel& model, double c, double tol,
                           double tauFrom = 1.0, double kinkThreshold = 0.2);

std::string cell_summary_json(const CellRun& run, const DriftEstimate& drift, const CorrectorField& corr);

}  // namespace hjh
