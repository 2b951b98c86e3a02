#pragma once

#include <string>
#include <vector>

#include "hjhomog/model.hpp"

namespace hjh {

struct FundamentalField;

/// Piecewise-linear trajectory through (t_k, x_k) with t_0 = 0.
struct Curve {
    int dim = 1;
    std::vector<double> t;
    std::vector<Vec> x;

    double duration() const { return t.empty() ? 0.0 : t.back(); }
    Vec position(double s) const;
    Vec segment_velocity(std::size_t seg) const;
    double max_speed() const;
};

/// Throws InvalidArgument unless times start at 0, increase strictly and all
/// entries are finite.
void validate_curve(const Curve& c);
Curve straight_curve(int dim, const Vec& from, const Vec& to, double t);

struct HerglotzPath {
    Curve curve;
    double c0 = 0.0;
    std::vector<double> times;
    std::vector<double> xi;
    double supAbsL = 0.0;      // largest |L| met by the integrator
    double lipschitzBound = 0.0;
    bool certified = false;    // consecutive samples respect the Lipschitz bound

    double final_value() const { return xi.back(); }
};

/// Classical RK4 for xi' = L(gamma, xi, gamma') with substeps aligned to the
/// curve nodes; the substep is min(segment length, dt) rounded to divide each segment.
HerglotzPath integrate_xi(const LagrangianView& view, const Curve& curve, double c, double dt = 1.0 / 256);

struct UpperBoundResult {
    bool pass = false;
    double margin = 0.0;  // m(t, gamma(t), gamma(0), c) - xi(t)
    double m = 0.0;
    double xi = 0.0;
};

UpperBoundResult upper_bound_check(const FundamentalField& field, const HerglotzPath& path, double tol);

std::string curve_to_csv(const Curve& c);
Curve curve_from_csv(const std::string& text);

}  // namespace hjh
