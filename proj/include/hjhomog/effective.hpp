#pragma once

#include <string>
#include <vector>

#include "hjhomog/cauchy.hpp"
#include "hjhomog/fundamental.hpp"
#include "hjhomog/legendre.hpp"

namespace hjh {

/// Sampled effective Lagrangian on a velocity tensor grid, its stabilization
/// gaps across epsilon, and (after estimate_Hbar) the dual samples.
struct EffectiveTable {
    int dim = 1;
    SampleGrid Lbar;                          // estimate at the smallest epsilon
    std::vector<double> gap;                  // |estimate(eps_min) - estimate(2 eps_min)|
    std::vector<bool> unstable;               // gap grew as epsilon shrank
    std::vector<double> epsList;              // decreasing
    std::vector<std::vector<double>> perEps;  // estimates for every epsilon
    double baseValue = 0.0;
    double schemeTolerance = 0.0;             // tolerance of the underlying fundamental solve, divided by tau

    SampleGrid Hbar;                          // empty until estimate_Hbar
    std::vector<bool> HbarUnattained;
    std::vector<double> HbarLipschitz;        // local slope bound per momentum sample

    double vmax() const;
    double Lbar_at(const Vec& v) const;  // Domain error outside the grid
    double Hbar_at(const Vec& p) const;
    bool flagged_near(const Vec& v) const;

    std::string Lbar_csv() const;  // v[,v2],Lbar,gap
    std::string Hbar_csv() const;  // p[,p2],Hbar,flag
};

/// L-bar(v) ~ eps * m(1/eps, v/eps, 0, c) - c from a single fundamental solve
/// that stores the slices tau = 1/eps. The grid's radius is derived from the
/// velocity axis.
EffectiveTable estimate_Lbar(const LagrangianView& view, const std::vector<double>& vAxis,
                             const std::vector<double>& epsList, const GridSpec& grid, double c = 0.0);

/// Discrete Legendre transform of the table on a momentum axis.
void estimate_Hbar(EffectiveTable& table, const std::vector<double>& pAxis);

/// max over grid midpoint triples of Lbar(mid) - (Lbar(a) + Lbar(b)) / 2.
double convexity_defect(const EffectiveTable& table);
/// Largest decrease of (Lbar(2v) - Lbar(v)) / |v| along grid rays.
double superlinearity_defect(const EffectiveTable& table);
/// Largest |Legendre(Legendre(Lbar)) - Lbar| on velocities whose maximizer is interior.
double legendre_roundtrip_gap(const EffectiveTable& table);

struct HopfLaxValue {
    double value = 0.0;
    Vec argmin{0.0, 0.0};
    bool touchedFlag = false;  // the minimizing velocity sits on an unstable table point
};

/// u(x,t) = inf over |x-y| <= M0 t of phi(y) + t Lbar((x-y)/t), by grid
/// minimization with local golden-section refinement. M0 defaults to the
/// table's velocity range.
HopfLaxValue hopf_lax(const InitialDatum& phi, const EffectiveTable& table, const Vec& x, double t,
                      double M0 = 0.0, int samplesPerUnit = 1024);

struct RateOptions {
    InitialDatum phi;
    double T = 2.0;
    double tMin = 0.25;
    std::vector<double> epsList{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
    CauchyGrid grid;                 // cell-scale discretization of the epsilon problems
    int monitorPerUnit = 256;
    double monitorDt = 1.0 / 32;
    double tableVmax = 4.0;
    double tableDv = 1.0 / 32;
    double tableTau = 64.0;
    bool control = true;             // repeat every run with the cell grid refined twice
    double controlThreshold = 0.2;
    double slopeLo = 0.8, slopeHi = 1.2;
};

struct RateReport {
    std::vector<double> eps;
    std::vector<double> errors;
    std::vector<double> controlErrors;
    std::vector<double> controlChange;  // |e_fine - e| / e
    double slope = 0.0, intercept = 0.0, C = 0.0;
    bool controlsPass = false;
    bool valid = false;  // controls passed (or were not requested)
    bool pass = false;   // valid and slope inside the band
    double seconds = 0.0;

    std::string to_csv() const;
    std::string to_json() const;
};

/// Measures sup |u^eps - u| over the periodic cell and t in [tMin, T] against
/// the Hopf-Lax solution built from a table computed with the same cell-scale
/// discretization as the epsilon problems.
RateReport rate_experiment(const LagrangianView& view, const RateOptions& opt);

/// Least-squares fit of log e against log eps; returns {slope, intercept}.
std::pair<double, double> loglog_fit(const std::vector<double>& eps, const std::vector<double>& err);

}  // namespace hjh
