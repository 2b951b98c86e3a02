#pragma once

#include <vector>

#include "hjhomog/lattice.hpp"
#include "hjhomog/model.hpp"

namespace hjh {

/// Time step, foot-point refinement and velocity cutoff of the
/// dynamic-programming scheme. Velocities are v = j * dv with integer j,
/// dv = h / (substeps * dt), |v| <= vmax; foot points land on a lattice refined
/// `substeps` times and are evaluated by multilinear interpolation.
struct SchemeSpec {
    double dt = 1.0 / 64.0;
    int substeps = 8;
    double vmax = 4.0;
};

/// Rectangle of nodes to update (inclusive local indices) and an optional
/// disc in which stencil-boundary argmins are counted.
struct UpdateRegion {
    std::array<int, kMaxDim> lo{0, 0};
    std::array<int, kMaxDim> hi{0, 0};
    Vec guardCenter{0.0, 0.0};
    double guardRadius = -1.0;  // negative: count everywhere in the rectangle
    double unreached = 1e300;   // values at or above this are not counted
};

struct StepStats {
    std::size_t counted = 0;
    std::size_t boundary = 0;
};

/// One explicit step of
///   out(x) = min_v [ V(x - v dt) + dt * (L(x - v dt, tilt.(x - v dt) + R(x - v dt), v) - tilt.v) ]
/// where R supplies the value-argument of L (R = V for time marching; the
/// previous Picard iterate otherwise). Ties in the minimum resolve toward
/// smaller |v|. Instances own scratch buffers and must not be shared across
/// concurrent steps.
/// Throws Numeric when more than 1% of the monitored minima sit on the outer
/// ring of the velocity stencil.
void check_stencil_guard(std::size_t counted, std::size_t boundary);

class SemiLagrangian {
public:
    SemiLagrangian(LagrangianView view, Lattice lattice, SchemeSpec spec, Vec tilt = {0.0, 0.0});

    const Lattice& lattice() const { return lat_; }
    const SchemeSpec& spec() const { return spec_; }
    double dv() const { return dv_; }
    int reach() const { return J_; }
    double max_speed() const { return J_ * dv_; }

    StepStats step(const double* V, const double* R, double* out) const;
    StepStats step(const double* V, const double* R, double* out, const UpdateRegion& region) const;

    UpdateRegion full_region() const;

private:
    enum class Path { Separable, Profile, General };

    void prepare(const double* V, const double* R, const std::array<std::int64_t, kMaxDim>& slo,
                 const std::array<std::int64_t, kMaxDim>& shi) const;
    double sub_y(int axis, std::int64_t sub) const;
    double sub_actual(int axis, std::int64_t sub) const;

    LagrangianView view_;
    Lattice lat_;
    SchemeSpec spec_;
    Vec tilt_;
    Path path_;
    int s_ = 1;
    int J_ = 0;
    double dv_ = 0.0;
    std::int64_t subPeriod_ = 1;

    struct Row {
        int j2;
        int w;   // half width of the full row
        int wi;  // half width of the interior part, -1 if the whole row is boundary
    };
    std::vector<Row> rows_;
    std::vector<std::vector<double>> kin_;  // per row, index j1 + w, includes dt and tilt

    std::array<std::int64_t, kMaxDim> subN_{1, 1};  // sub-node extent with ghosts
    mutable std::vector<double> G_;                  // separable: V_f + dt * potential
    mutable std::vector<double> Vf_, Rf_;            // interpolated values (profile / general)
    mutable std::vector<double> Af_;                 // profile values
};

}  // namespace hjh
