#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hjhomog/types.hpp"

namespace hjh {

enum class Family {
    QuadraticFree,
    QuadraticPotential,
    SineGordon,
    Dislocation,
    TransportDerived,
    CustomAnalytic,
};

const char* family_name(Family f);

/// Smooth increasing approximation of the unit staircase used by the
/// dislocation family:  E(r) = r + (1-delta) sin(2 pi r) / (2 pi).
struct StaircaseSmoother {
    double delta = 0.1;
    double newtonTol = 1e-14;

    double eval(double r) const;
    double derivative(double r) const;
    /// Safeguarded Newton with a bisection fallback on a bracket of width one.
    double invert(double u) const;
};

double staircase_eval(const StaircaseSmoother& s, double r);
double staircase_invert(const StaircaseSmoother& s, double u);

using ParamMap = std::map<std::string, double>;

/// Analytic Hamiltonian H(y, r, p), 1-periodic in y and r, convex and
/// superlinear in p, together with its growth metadata. Instances are
/// immutable once built and can be shared between threads.
class HamiltonianModel {
public:
    Family family() const { return family_; }
    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    const ParamMap& params() const { return params_; }

    double H(const Vec& y, double r, const Vec& p) const;
    /// Closed-form convex dual in the momentum slot.
    double L(const Vec& y, double r, const Vec& v) const;

    /// True when L(y,r,v) = kinetic(v) + potential(y,r).
    bool separable() const { return family_ != Family::Dislocation; }
    double kinetic(const Vec& v) const;
    double potential(const Vec& y, double r) const;

    /// Dislocation only: local free speed a(y,r) = c(y) - (r - E^{-1}(r)).
    double free_speed(const Vec& y, double r) const;
    double radial_lagrangian(double a, double speed) const;

    double K() const { return K_; }
    double K_sampled() const { return KSampled_; }
    double q1() const { return q1_; }
    double q2() const { return q2_; }
    double alpha0() const { return alpha0_; }
    double beta0() const { return beta0_; }
    double vmax() const { return vmax_; }

    /// Minimizer of p -> H(y,r,p); every shipped family is even in p.
    Vec argmin_p() const { return {0.0, 0.0}; }

    /// Radius of the velocity stencil that keeps minimizing velocities inside,
    /// for initial data with Lipschitz constant lip.
    double default_vmax(double lip) const;

    const StaircaseSmoother& staircase() const { return stair_; }

    /// Stable 64-bit digest of family, dimension and parameters.
    std::uint64_t digest() const;

    friend std::shared_ptr<const HamiltonianModel> make_model(const std::string&, const ParamMap&, int);
    friend std::shared_ptr<const HamiltonianModel> build_dislocation(const ParamMap&, double, double, int, bool);

private:
    HamiltonianModel() = default;
    void finalize();
    double c_field(const Vec& y) const;

    Family family_ = Family::QuadraticFree;
    std::string name_;
    int dim_ = 1;
    ParamMap params_;

    double amp_ = 0.0;
    double c0_ = 0.75, c1_ = 0.2, c2_ = 0.0, R_ = 10.0;
    double f0_ = 2.0, f1_ = 1.0;
    double q_ = 2.0, qDual_ = 2.0, aR_ = 0.0, bY_ = 0.0;
    StaircaseSmoother stair_;

    double K_ = 0.0, KSampled_ = 0.0;
    double q1_ = 2.0, q2_ = 2.0;
    double alpha0_ = 0.0, beta0_ = 1.0;
    double vmax_ = 4.0;
};

using ModelPtr = std::shared_ptr<const HamiltonianModel>;

/// Builds a zoo model by name. Unknown names or parameter keys raise a
/// configuration error naming the offending entry.
ModelPtr make_model(const std::string& name, const ParamMap& params, int dim = 1);

/// Dislocation Hamiltonian with c(y) = c0 + c1 cos(2 pi y1) + c2 cos(2 pi y2).
/// With enforce=true a field with min c <= 1/2 is rejected.
ModelPtr build_dislocation(const ParamMap& cField, double delta, double R, int dim = 1,
                           bool enforce = true);

std::vector<std::string> list_models();
/// Formula, parameters and constraints of a family; throws Config for unknown names.
std::string describe_model(const std::string& name);

/// Lagrangian evaluated either in closed form, by numeric Legendre transform
/// over a momentum grid, or from a user callable (used in tests).
class LagrangianView {
public:
    enum class Mode { Analytic, Tabulated, Custom };
    using Fn = std::function<double(const Vec&, double, const Vec&)>;
    using KineticFn = std::function<double(const Vec&)>;
    using PotentialFn = std::function<double(const Vec&, double)>;

    static LagrangianView analytic(ModelPtr model);
    static LagrangianView tabulated(ModelPtr model, double pmax, int pointsPerAxis);
    static LagrangianView custom(int dim, double K, Fn L);
    static LagrangianView custom_separable(int dim, double K, KineticFn kin, PotentialFn pot);

    Mode mode() const { return mode_; }
    int dim() const { return dim_; }
    double K() const { return K_; }
    const HamiltonianModel* model() const { return model_.get(); }
    ModelPtr model_ptr() const { return model_; }
    /// Momentum grid spacing of a tabulated view, zero otherwise.
    double resolution() const { return dp_; }

    double L(const Vec& y, double r, const Vec& v) const;

    bool separable() const { return separable_; }
    double kinetic(const Vec& v) const;
    double potential(const Vec& y, double r) const;

    /// True when L depends on (y,r) only through a scalar profile a(y,r).
    bool has_profile() const { return profile_; }
    double profile(const Vec& y, double r) const { return model_->free_speed(y, r); }
    double profile_lagrangian(double a, const Vec& v) const {
        return model_->radial_lagrangian(a, norm(v));
    }

private:
    double tabulated_L(const Vec& y, double r, const Vec& v) const;
    double tabulated_kinetic(const Vec& v) const;

    Mode mode_ = Mode::Analytic;
    int dim_ = 1;
    double K_ = 0.0;
    ModelPtr model_;
    Fn fn_;
    KineticFn kin_;
    PotentialFn pot_;
    bool separable_ = false;
    bool profile_ = false;
    std::vector<double> pAxis_;
    double dp_ = 0.0;
};

struct AssumptionEntry {
    std::string name;
    double worst = 0.0;  // worst residual (equalities) or worst slack deficit (inequalities)
    double tol = 0.0;
    bool pass = true;
    std::string note;
};

struct AssumptionReport {
    std::string model;
    std::vector<AssumptionEntry> entries;
    double K = 0.0;
    double KSampled = 0.0;
    bool pass = true;
    std::string to_json() const;
};

AssumptionReport verify_assumptions(const HamiltonianModel& model, int sampleBudget, double tol);

/// Growth constant K(A) in L(y,r,v) >= A|v| - K(A), fitted on samples.
double superlinearity_constant(const LagrangianView& view, double A, double vmax);

}  // namespace hjh
