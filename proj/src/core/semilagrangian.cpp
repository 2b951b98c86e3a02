#include "hjhomog/semilagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hjh {

namespace {
constexpr double kFar = 1e300;  // stands in for +infinity outside a box lattice
}

void check_stencil_guard(std::size_t counted, std::size_t boundary) {
    if (counted > 0 && double(boundary) > 0.01 * double(counted)) {
        std::ostringstream os;
        os << "velocity stencil too small: minimum attained on the stencil boundary at " << boundary << " of "
           << counted << " monitored points; raise vmax";
        fail(ErrorCode::Numeric, os.str());
    }
}

SemiLagrangian::SemiLagrangian(LagrangianView view, Lattice lattice, SchemeSpec spec, Vec tilt)
    : view_(std::move(view)), lat_(lattice), spec_(spec), tilt_(tilt) {
    require(spec_.dt > 0.0 && std::isfinite(spec_.dt), ErrorCode::InvalidArgument, "time step must be positive");
    require(spec_.substeps >= 1, ErrorCode::InvalidArgument, "substeps must be >= 1");
    require(spec_.vmax > 0.0, ErrorCode::InvalidArgument, "vmax must be positive");
    require(view_.dim() == lat_.dim, ErrorCode::InvalidArgument, "lattice and model dimensions differ");
    s_ = spec_.substeps;
    dv_ = lat_.h() / (s_ * spec_.dt);
    J_ = int(std::floor(spec_.vmax / dv_ + 1e-9));
    require(J_ >= 1, ErrorCode::Config,
            "velocity stencil is empty: vmax is smaller than h/(substeps*dt); raise vmax or substeps");
    subPeriod_ = std::int64_t(s_) * lat_.ppu;
    path_ = view_.separable() ? Path::Separable : view_.has_profile() ? Path::Profile : Path::General;

    const int J = J_;
    const int J1 = J - 1;
    if (lat_.dim == 1) {
        rows_.push_back({0, J, J1});
    } else {
        for (int j2 = -J; j2 <= J; ++j2) {
            int w = int(std::floor(std::sqrt(double(J) * J - double(j2) * j2) + 1e-12));
            int wi = (J1 * J1 >= j2 * j2) ? int(std::floor(std::sqrt(double(J1) * J1 - double(j2) * j2) + 1e-12)) : -1;
            rows_.push_back({j2, w, wi});
        }
    }
    // Row tables are stored reversed: entry q corresponds to j1 = w - q.
    for (const auto& row : rows_) {
        std::vector<double> k(2 * row.w + 1, 0.0);
        for (int q = 0; q <= 2 * row.w; ++q) {
            const int j1 = row.w - q;
            Vec v{j1 * dv_, lat_.dim == 2 ? row.j2 * dv_ : 0.0};
            double base = path_ == Path::Separable ? view_.kinetic(v) : 0.0;
            k[q] = spec_.dt * (base - dot(tilt_, v));
        }
        kin_.push_back(std::move(k));
    }

    for (int a = 0; a < kMaxDim; ++a) {
        if (a >= lat_.dim) {
            subN_[a] = 1;
            continue;
        }
        subN_[a] = lat_.periodic ? std::int64_t(s_) * lat_.n[a] + 2 * J
                                 : std::int64_t(s_) * (lat_.n[a] - 1) + 1 + 2 * J;
    }
    const std::size_t total = std::size_t(subN_[0] * subN_[1]);
    if (path_ == Path::Separable) {
        G_.assign(total, kFar);
    } else {
        Vf_.assign(total, kFar);
        if (path_ == Path::Profile) Af_.assign(total, 0.0);
        else Rf_.assign(total, 0.0);
    }
}

UpdateRegion SemiLagrangian::full_region() const {
    UpdateRegion r;
    for (int a = 0; a < lat_.dim; ++a) r.hi[a] = lat_.n[a] - 1;
    return r;
}

double SemiLagrangian::sub_y(int axis, std::int64_t sub) const {
    const std::int64_t g = std::int64_t(s_) * lat_.origin[axis] + sub;
    return double(floor_mod(g, subPeriod_)) / double(subPeriod_);
}

double SemiLagrangian::sub_actual(int axis, std::int64_t sub) const {
    return double(std::int64_t(s_) * lat_.origin[axis] + sub) / double(subPeriod_);
}

void SemiLagrangian::prepare(const double* V, const double* R, const std::array<std::int64_t, kMaxDim>& slo,
                             const std::array<std::int64_t, kMaxDim>& shi) const {
    const int s = s_;
    const int J = J_;
    const int dim = lat_.dim;
    const std::size_t n0 = std::size_t(lat_.n[0]);
    const bool per = lat_.periodic;
    const bool sameR = (V == R);
    const bool tilted = tilt_[0] != 0.0 || tilt_[1] != 0.0;
    const std::int64_t coreN0 = std::int64_t(s) * lat_.n[0];
    const std::int64_t coreN1 = dim == 2 ? std::int64_t(s) * lat_.n[1] : 1;

    // Interpolation stencil along an axis for a sub-node index k (core units).
    auto split = [&](int axis, std::int64_t k, std::int64_t& a0, std::int64_t& a1, double& w) {
        const std::int64_t a = k >= 0 ? k / s : -((-k + s - 1) / s);
        const std::int64_t b = k - a * s;
        w = double(b) / s;
        if (per) {
            a0 = floor_mod(a, lat_.n[axis]);
            a1 = floor_mod(a + 1, lat_.n[axis]);
        } else {
            a0 = a;
            a1 = b == 0 ? a : a + 1;
        }
    };

    const std::int64_t lo1 = dim == 2 ? slo[1] : 0, hi1 = dim == 2 ? shi[1] : 0;
#ifdef HJHOMOG_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t k1 = lo1; k1 <= hi1; ++k1) {
        std::int64_t b0 = 0, b1 = 0;
        double w1 = 0.0;
        std::int64_t core1 = k1;
        if (dim == 2) {
            if (per) core1 = floor_mod(k1, coreN1);
            split(1, core1, b0, b1, w1);
        }
        const double y1 = dim == 2 ? sub_y(1, core1) : 0.0;
        const double y1act = dim == 2 && tilted ? sub_actual(1, k1) : 0.0;
        for (std::int64_t k0 = slo[0]; k0 <= shi[0]; ++k0) {
            const std::int64_t core0 = per ? floor_mod(k0, coreN0) : k0;
            std::int64_t a0, a1;
            double w0;
            split(0, core0, a0, a1, w0);
            auto interp = [&](const double* F) {
                double lo = (1 - w0) * F[a0 + n0 * b0] + (w0 > 0 ? w0 * F[a1 + n0 * b0] : 0.0);
                if (dim == 1 || w1 == 0.0) return lo;
                double hi = (1 - w0) * F[a0 + n0 * b1] + (w0 > 0 ? w0 * F[a1 + n0 * b1] : 0.0);
                return (1 - w1) * lo + w1 * hi;
            };
            const double vf = interp(V);
            const double rf = sameR ? vf : interp(R);
            Vec y{sub_y(0, core0), y1};
            double shift = 0.0;
            if (tilted) shift = tilt_[0] * sub_actual(0, k0) + tilt_[1] * y1act;
            const std::size_t idx = std::size_t(k0 + J) + std::size_t(subN_[0]) * std::size_t(dim == 2 ? k1 + J : 0);
            switch (path_) {
                case Path::Separable:
                    G_[idx] = vf + spec_.dt * view_.potential(y, shift + rf);
                    break;
                case Path::Profile:
                    Vf_[idx] = vf;
                    Af_[idx] = view_.profile(y, shift + rf);
                    break;
                case Path::General:
                    Vf_[idx] = vf;
                    Rf_[idx] = shift + rf;
                    break;
            }
        }
    }
}

StepStats SemiLagrangian::step(const double* V, const double* R, double* out) const {
    return step(V, R, out, full_region());
}

StepStats SemiLagrangian::step(const double* V, const double* R, double* out, const UpdateRegion& reg) const {
    const int s = s_;
    const int J = J_;
    const int dim = lat_.dim;
    const std::size_t n0 = std::size_t(lat_.n[0]);

    std::array<std::int64_t, kMaxDim> slo{0, 0}, shi{0, 0};
    for (int a = 0; a < dim; ++a) {
        if (lat_.periodic) {
            slo[a] = -J;
            shi[a] = std::int64_t(s) * lat_.n[a] + J - 1;
        } else {
            slo[a] = std::max<std::int64_t>(0, std::int64_t(s) * reg.lo[a] - J);
            shi[a] = std::min<std::int64_t>(std::int64_t(s) * (lat_.n[a] - 1), std::int64_t(s) * reg.hi[a] + J);
        }
    }
    prepare(V, R, slo, shi);

    // Copy untouched nodes.
    if (!lat_.periodic) {
        const std::size_t total = lat_.size();
        for (std::size_t i = 0; i < total; ++i) out[i] = V[i];
    }

    const std::size_t stride = std::size_t(subN_[0]);
    const bool guard = reg.guardRadius >= 0.0;
    const double dt = spec_.dt;
    std::size_t counted = 0, boundary = 0;
    const int lo1 = dim == 2 ? reg.lo[1] : 0, hi1 = dim == 2 ? reg.hi[1] : 0;

#ifdef HJHOMOG_HAVE_OPENMP
#pragma omp parallel for schedule(static) reduction(+ : counted, boundary)
#endif
    for (int i1 = lo1; i1 <= hi1; ++i1) {
        for (int i0 = reg.lo[0]; i0 <= reg.hi[0]; ++i0) {
            double best = kFar, bestInterior = kFar;
            for (std::size_t ri = 0; ri < rows_.size(); ++ri) {
                const Row& row = rows_[ri];
                const double* kin = kin_[ri].data();
                // buffer index of the foot for j1 = w (q = 0) in this row
                const std::int64_t f1 = dim == 2 ? std::int64_t(s) * i1 - row.j2 + J : 0;
                const std::size_t base = std::size_t(std::int64_t(s) * i0 - row.w + J) + stride * std::size_t(f1);
                const int w = row.w, wi = row.wi;
                const int qlo = w - wi, qhi = w + wi;  // interior range, empty if wi < 0
                if (path_ == Path::Separable) {
                    const double* g = G_.data() + base;
                    double m = kFar;
                    for (int q = qlo; q <= qhi; ++q) m = std::min(m, g[q] + kin[q]);
                    double e = kFar;
                    for (int q = 0; q < qlo; ++q) e = std::min(e, g[q] + kin[q]);
                    for (int q = std::max(qhi + 1, 0); q <= 2 * w; ++q) e = std::min(e, g[q] + kin[q]);
                    bestInterior = std::min(bestInterior, m);
                    best = std::min(best, std::min(m, e));
                } else {
                    const double* vf = Vf_.data() + base;
                    for (int q = 0; q <= 2 * w; ++q) {
                        if (vf[q] >= kFar) continue;
                        const int j1 = w - q;
                        Vec v{j1 * dv_, dim == 2 ? row.j2 * dv_ : 0.0};
                        double l;
                        if (path_ == Path::Profile) {
                            l = view_.profile_lagrangian(Af_[base + q], v);
                        } else {
                            const std::int64_t k0 = std::int64_t(s) * i0 - j1;
                            const std::int64_t k1 = dim == 2 ? std::int64_t(s) * i1 - row.j2 : 0;
                            const std::int64_t c0 = lat_.periodic ? floor_mod(k0, std::int64_t(s) * lat_.n[0]) : k0;
                            const std::int64_t c1 = lat_.periodic && dim == 2 ? floor_mod(k1, std::int64_t(s) * lat_.n[1]) : k1;
                            Vec y{sub_y(0, c0), dim == 2 ? sub_y(1, c1) : 0.0};
                            l = view_.L(y, Rf_[base + q], v);
                        }
                        const double c = vf[q] + dt * l + kin[q];
                        best = std::min(best, c);
                        if (q >= qlo && q <= qhi) bestInterior = std::min(bestInterior, c);
                    }
                }
            }
            const std::size_t node = std::size_t(i0) + n0 * std::size_t(i1);
            out[node] = best;
            if (best < reg.unreached) {
                bool inGuard = true;
                if (guard) {
                    Vec x{lat_.coord(0, i0), dim == 2 ? lat_.coord(1, i1) : 0.0};
                    inGuard = norm(x - reg.guardCenter) <= reg.guardRadius;
                }
                if (inGuard) {
                    ++counted;
                    if (best < bestInterior) ++boundary;
                }
            }
        }
    }
    return {counted, boundary};
}

}  // namespace hjh
