#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hjhomog/lattice.hpp"
#include "hjhomog/model.hpp"
#include "hjhomog/semilagrangian.hpp"

namespace hjh {

inline constexpr double kSentinelSlope = 1e6;

struct GridSpec {
    int ppu = 64;          // nodes per unit length
    double dt = 1.0 / 64;  // requested time step; the solver rounds to divide T
    int substeps = 8;
    double vmax = 0.0;     // 0 selects the model default
    double radius = 1.0;   // region of interest |x - y| <= radius
    double pad = -1.0;     // negative selects 2 vmax dt + 2 h
    int storeEvery = 1;    // keep every k-th slice (the last slice is always kept)
};

enum class Scheme { Marching, Picard };

struct PicardOptions {
    double tol = 1e-6;
    int maxIterations = 60;
};

struct PicardCertificate {
    double K = 0.0;
    double T = 0.0;
    int iterations = 0;
    long double theoreticalBound = 0.0L;
    double empiricalResidual = 0.0;
    bool converged = false;
    std::vector<double> residuals;   // sup |phi_{n+1} - phi_n|, n = 1, 2, ...
    std::vector<long double> bounds; // (K T)^n / n!
};

/// (K T)^n / n! in extended precision.
long double picard_bound(double K, double T, int n);

struct FundamentalField {
    Vec base{0.0, 0.0};
    double c = 0.0;
    double T = 0.0;
    int steps = 0;
    SchemeSpec scheme;
    double dv = 0.0;
    GridField grid;
    std::size_t guardCounted = 0;
    std::size_t guardBoundary = 0;

    double h() const { return grid.lattice.h(); }
    double resolution() const { return h() + scheme.dt; }
    /// Acceptance tolerance of the discrete fundamental solution.
    double tolerance() const { return 2.0 * resolution() + dv * dv; }
    bool reached(double value) const { return value < c + 0.5 * kSentinelSlope; }
    /// Interpolated value at a stored time; throws Domain outside the box or
    /// when t is not a stored slice time.
    double value(double t, const Vec& x) const;
    std::size_t slice_at(double t) const;
};

struct FundamentalResult {
    FundamentalField field;
    PicardCertificate certificate;
};

/// Fundamental solution m(t, x, y, c) of the implicit variational problem on a
/// box around y. Marching resolves the value-argument of L from the previous
/// slice; Picard iterates the space-time field with L's value-argument frozen.
FundamentalResult solve_m(const LagrangianView& view, const Vec& y, double c, double T, const GridSpec& grid,
                          Scheme scheme = Scheme::Marching, const PicardOptions& picard = {});

/// Classical metric m0(t, x, y): same scheme with L(., 0, .).
FundamentalField solve_m0(const LagrangianView& view, const Vec& y, double T, const GridSpec& grid);

struct BdmeResult {
    double C = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// Smallest C with c - C t <= m <= c + C t on the cone |x - y| <= M0 t (up to
/// the field's discretization tolerance), compared against
/// max(sup_{|v|<=M0}|L(y,0,v)| + K, -inf L(y,0,.) + K).
BdmeResult bdme_check(const FundamentalField& field, const LagrangianView& view, double M0);

struct DefectSample {
    int sigma = 0;
    int l = 0;
    double defect = 0.0;
};

struct SubadditivityReport {
    std::vector<DefectSample> sub;  // m((s+l)t) - m(s t) - m(l t)
    std::vector<DefectSample> sup;  // 2 m(s t) - m(2 s t), stored with l = s
    double fittedC = 0.0;
    double subSlope = 0.0;  // regression slope of defects against log2(scale)
    double supSlope = 0.0;
    bool pass = false;
};

SubadditivityReport subadditivity_probe(const LagrangianView& view, const Vec& y, double c, double t,
                                        const std::vector<std::pair<int, int>>& pairs, const GridSpec& grid);

/// One CSV per stored slice; returns the written paths.
std::vector<std::string> write_field_csv(const FundamentalField& field, const std::string& dir,
                                         const std::string& prefix);
/// Binary layout (little endian): "HJHF" magic, u32 version=1, u32 dim, u32 ppu,
/// i64 origin[2], u32 n[2], u32 slices, f64 base[2], f64 c, f64 times[slices],
/// then f64 values slice-major, first axis fastest.
void write_field_binary(const FundamentalField& field, const std::string& path);
FundamentalField read_field_binary(const std::string& path);

}  // namespace hjh
