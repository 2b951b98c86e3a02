#pragma once

#include <string>
#include <vector>

#include "hjhomog/lattice.hpp"
#include "hjhomog/model.hpp"
#include "hjhomog/semilagrangian.hpp"

namespace hjh {

enum class PhiKind { Constant, Sinusoid, Bump, Well };

struct PhiComponent {
    PhiKind kind = PhiKind::Constant;
    double amplitude = 0.0;  // constant value, sinusoid amplitude, bump/well height
    int frequency = 1;       // sinusoid cycles per unit length
    double phase = 0.0;
    double width = 1.0;      // bump/well half-width
    Vec center{0.0, 0.0};
};

/// phi(x) = tilt.x + offset + sum of periodic components. Bumps and wells are
/// periodized with the integer period `period`, which is also the period of
/// the computational domain.
struct InitialDatum {
    Vec tilt{0.0, 0.0};
    double offset = 0.0;
    int period = 1;
    std::vector<PhiComponent> parts;

    double operator()(const Vec& x, int dim) const;
    double periodic_part(const Vec& x, int dim) const;
    double lipschitz(int dim) const;
    double sup_abs_periodic(int dim) const;

    static InitialDatum constant(double a);
    static InitialDatum affine(const Vec& p);
    static InitialDatum sinusoid(double amplitude, int frequency = 1, double phase = 0.0);
    static InitialDatum bump(double height, double width, int period, const Vec& center = {0.0, 0.0});
    static InitialDatum well(double depth, double width, int period, const Vec& center = {0.0, 0.0});
};

/// Cell-scale discretization: nodes per unit cell, cell-scale time step,
/// foot refinement and velocity cutoff.
struct CauchyGrid {
    int ppc = 64;
    double dtau = 1.0 / 64;
    int substeps = 8;
    double vmax = 0.0;         // 0 selects the model default for Lip(phi)
    double outputDt = 1.0 / 16; // physical spacing of stored slices
};

struct CauchyProblem {
    LagrangianView view;
    InitialDatum phi;
    double epsilon = 1.0;
    double T = 1.0;
    CauchyGrid grid;
};

enum class Backend { Rescaled, Composition };
const char* backend_name(Backend b);

/// u^eps on a periodic physical lattice (spacing eps/ppc) at stored times.
struct SolutionField {
    Backend backend = Backend::Rescaled;
    double epsilon = 1.0;
    int dim = 1;
    GridField grid;
    Vec tilt{0.0, 0.0};
    double dx = 0.0;  // physical spacing
    double dt = 0.0;  // physical time step
    double dv = 0.0;
    std::size_t guardCounted = 0, guardBoundary = 0;

    double resolution() const { return dx + dt; }
    double tolerance() const { return 2.0 * resolution(); }
    /// u^eps at a stored time and arbitrary x (periodic part interpolated).
    double value(std::size_t slice, const Vec& x) const;
    std::size_t slice_at(double t) const;
};

SolutionField solve_cauchy(const CauchyProblem& prob, Backend backend);

struct EnvelopeResult {
    double M = 0.0;
    double upper = 0.0;  // max of u - phi - M t
    double lower = 0.0;  // max of phi - M t - u
    double tol = 0.0;
    bool pass = false;
};

/// M = sup over (y, r) and |p| <= Lip(phi) of |H|.
double envelope_constant(const HamiltonianModel& model, double lip);
EnvelopeResult envelope_check(const SolutionField& field, const CauchyProblem& prob);

struct ExpansivenessResult {
    double ratio = 0.0;
    double gap = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// ||u(t+s) - u(t)|| / (e^{K t / eps} M s), asserted <= 1 + slack.
ExpansivenessResult expansiveness_check(const SolutionField& field, const CauchyProblem& prob, double s, double t,
                                        double slack = 0.05);

/// Maximum absolute difference of two fields on their common stored times.
double field_gap(const SolutionField& a, const SolutionField& b);

std::vector<std::string> write_solution_csv(const SolutionField& field, const std::string& dir,
                                            const std::string& prefix);

}  // namespace hjh
