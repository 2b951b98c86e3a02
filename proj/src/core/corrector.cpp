#include "hjhomog/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "hjhomog/semilagrangian.hpp"

namespace hjh {

namespace {

double regression_slope(const std::vector<double>& t, const std::vector<double>& y, std::size_t from,
                        std::size_t to) {
    const double n = double(to - from);
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = from; i < to; ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    const double den = n * stt - st * st;
    return den > 0.0 ? (n * sty - st * sy) / den : 0.0;
}

struct SliceStats {
    double mean, lo, hi;
};

SliceStats stats(const std::vector<double>& s) {
    const auto [mn, mx] = std::minmax_element(s.begin(), s.end());
    return {std::accumulate(s.begin(), s.end(), 0.0) / double(s.size()), *mn, *mx};
}

}  // namespace

CellRun solve_cell(const LagrangianView& view, const std::array<Rational, kMaxDim>& p, const CellDatum& w0,
                   double tauMax, const CellGrid& grid) {
    const int dim = view.dim();
    require(bool(w0), ErrorCode::InvalidArgument, "cell problem needs an initial datum");
    require(tauMax > 0.0 && std::isfinite(tauMax), ErrorCode::InvalidArgument, "cell horizon must be positive");
    require(grid.ppc >= 4 && grid.dtau > 0.0 && grid.substeps >= 1 && grid.storeDtau > 0.0,
            ErrorCode::Config, "invalid cell grid");

    CellRun run;
    run.dim = dim;
    run.p = p;
    std::int64_t q = 1;
    for (int a = 0; a < dim; ++a) {
        q = std::lcm(q, p[a].den());
        run.pv[a] = p[a].value();
    }
    require(q <= 64, ErrorCode::Unsupported, "slope denominator too large for the enlarged cell");
    run.cell = int(q);

    const int steps = std::max(1, int(std::ceil(tauMax / grid.dtau - 1e-9)));
    SchemeSpec spec;
    spec.dt = tauMax / steps;
    spec.substeps = grid.substeps;
    const HamiltonianModel* m = view.model();
    spec.vmax = grid.vmax > 0.0 ? grid.vmax : (m ? m->default_vmax(norm(run.pv) + 1.0) : 4.0);
    if (view.K() * spec.dt >= 1.0) {
        std::ostringstream os;
        os << "cell time step " << spec.dt << " violates dt*K < 1 (K = " << view.K() << ")";
        fail(ErrorCode::Config, os.str());
    }

    const Lattice lat = periodic_lattice(dim, grid.ppc, {run.cell, run.cell});
    SemiLagrangian sl(view, lat, spec, run.pv);
    run.tauMax = tauMax;
    run.dtau = spec.dt;
    run.dv = sl.dv();
    run.w.lattice = lat;

    const int every = std::max(1, int(std::llround(grid.storeDtau / spec.dt)));
    std::vector<double> cur(lat.size()), next(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = w0(lat.node(i));
    run.w.times.push_back(0.0);
    run.w.slices.push_back(cur);
    for (int k = 1; k <= steps; ++k) {
        const StepStats st = sl.step(cur.data(), cur.data(), next.data());
        run.guardCounted += st.counted;
        run.guardBoundary += st.boundary;
        cur.swap(next);
        for (double v : cur)
            if (!std::isfinite(v)) fail(ErrorCode::Numeric, "non-finite value in the cell march");
        if (k % every == 0 || k == steps) {
            run.w.times.push_back(k * spec.dt);
            run.w.slices.push_back(cur);
        }
    }
    check_stencil_guard(run.guardCounted, run.guardBoundary);
    return run;
}

CellRun solve_cell(const LagrangianView& view, const Vec& p, const CellDatum& w0, double tauMax,
                   const CellGrid& grid, std::int64_t maxDen) {
    std::array<Rational, kMaxDim> rp{};
    for (int a = 0; a < view.dim(); ++a) rp[a] = Rational::from_double(p[a], maxDen);
    return solve_cell(view, rp, w0, tauMax, grid);
}

DriftEstimate extract_Hbar_drift(const CellRun& run) {
    const auto& t = run.w.times;
    require(t.size() >= 8, ErrorCode::InvalidArgument, "cell run stores too few slices for a drift fit");
    std::size_t from = 0;
    while (from < t.size() && t[from] < 0.5 * run.tauMax) ++from;
    require(t.size() - from >= 4, ErrorCode::InvalidArgument, "cell run stores too few late slices");

    std::vector<double> mean(t.size()), lo(t.size()), hi(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        const SliceStats s = stats(run.w.slices[k]);
        mean[k] = s.mean;
        lo[k] = s.lo;
        hi[k] = s.hi;
    }
    const std::size_t mid = from + (t.size() - from) / 2;
    DriftEstimate d;
    d.value = -regression_slope(t, mean, from, t.size());
    const double cands[] = {
        d.value,
        -regression_slope(t, lo, from, t.size()),
        -regression_slope(t, hi, from, t.size()),
        -regression_slope(t, mean, from, mid + 1),
        -regression_slope(t, mean, mid, t.size()),
    };
    d.lo = *std::min_element(std::begin(cands), std::end(cands));
    d.hi = *std::max_element(std::begin(cands), std::end(cands));
    d.flagged = d.hi - d.lo > 0.1;
    return d;
}

CorrectorField corrector_extract(const CellRun& run, double Hbar, double tol) {
    CorrectorField c;
    c.p = run.pv;
    c.Hbar = Hbar;
    c.v.lattice = run.w.lattice;
    c.v.times = run.w.times;
    c.v.slices.reserve(run.w.slices.size());
    for (std::size_t k = 0; k < run.w.slices.size(); ++k) {
        std::vector<double> s = run.w.slices[k];
        for (double& x : s) x += Hbar * run.w.times[k];
        const SliceStats st = stats(s);
        c.oscillation.push_back(st.hi - st.lo);
        c.supAbs.push_back(std::max(std::abs(st.lo), std::abs(st.hi)));
        c.v.slices.push_back(std::move(s));
    }
    c.C = *std::max_element(c.supAbs.begin(), c.supAbs.end());

    const auto& t = c.v.times;
    std::size_t from = 0;
    while (from < t.size() && t[from] < 0.5 * run.tauMax) ++from;
    from = std::min(from, t.size() > 2 ? t.size() - 2 : 0);
    c.growthRate = regression_slope(t, c.supAbs, from, t.size());
    const double early = *std::max_element(c.supAbs.begin(), c.supAbs.begin() + std::ptrdiff_t(from) + 1);
    const double late = *std::max_element(c.supAbs.begin() + std::ptrdiff_t(from), c.supAbs.end());
    c.bounded = late <= early + tol && c.growthRate * (run.tauMax - t[from]) <= tol + 0.1 * c.C;
    return c;
}

InfSupResult inf_sup_probe(const CorrectorField& field, const HamiltonianModel& model, double c, double tol,
                           double tauFrom, double kinkThreshold) {
    const Lattice& lat = field.v.lattice;
    const int dim = lat.dim;
    const double h = lat.h();
    const std::size_t n0 = std::size_t(lat.n[0]);
    const double kappa = kinkThreshold * (1.0 + norm(field.p));
    InfSupResult r;
    r.c = c;
    r.margin = -std::numeric_limits<double>::infinity();
    const auto& t = field.v.times;
    std::size_t total = 0, kinks = 0;
    for (std::size_t k = 1; k + 1 < t.size(); ++k) {
        if (t[k] < tauFrom) continue;
        const auto& prev = field.v.slices[k - 1];
        const auto& cur = field.v.slices[k];
        const auto& next = field.v.slices[k + 1];
        const double dtm = t[k] - t[k - 1], dtp = t[k + 1] - t[k];
        for (std::size_t i = 0; i < lat.size(); ++i) {
            ++total;
            const int idx[2] = {int(i % n0), int(i / n0)};
            const double vtm = (cur[i] - prev[i]) / dtm, vtp = (next[i] - cur[i]) / dtp;
            bool kink = std::abs(vtm - vtp) > kappa * std::max(1.0, std::abs(vtm));
            Vec P{0.0, 0.0};
            for (int a = 0; a < dim && !kink; ++a) {
                auto at = [&](int shift) {
                    int j[2] = {idx[0], idx[1]};
                    j[a] = (j[a] + shift + lat.n[a]) % lat.n[a];
                    return cur[std::size_t(j[1]) * n0 + std::size_t(j[0])];
                };
                const double dm = (cur[i] - at(-1)) / h, dp = (at(1) - cur[i]) / h;
                kink = std::abs(dp - dm) > kappa;
                P[a] = field.p[a] + 0.5 * (dm + dp);
            }
            if (kink) {
                ++kinks;
                continue;
            }
            const Vec y = lat.node(i);
            const double res =
                0.5 * (vtm + vtp) + model.H(y, dot(field.p, y) + cur[i] - c * t[k], P) - c;
            r.margin = std::max(r.margin, res);
        }
    }
    require(total > kinks, ErrorCode::InvalidArgument, "no smooth stored node at or after the probe start time");
    r.kinkFraction = double(kinks) / double(total);
    r.pass = r.margin <= tol;
    return r;
}

std::string cell_summary_json(const CellRun& run, const DriftEstimate& drift, const CorrectorField& corr) {
    nlohmann::ordered_json j;
    std::vector<std::string> p;
    for (int a = 0; a < run.dim; ++a) p.push_back(run.p[a].str());
    j["p"] = p;
    j["cell"] = run.cell;
    j["tau_max"] = run.tauMax;
    j["dtau"] = run.dtau;
    j["dv"] = run.dv;
    j["Hbar"] = {{"value", drift.value}, {"lo", drift.lo}, {"hi", drift.hi}, {"flagged", drift.flagged}};
    j["corrector"] = {{"C", corr.C}, {"growth_rate", corr.growthRate}, {"bounded", corr.bounded},
                      {"final_oscillation", corr.oscillation.empty() ? 0.0 : corr.oscillation.back()}};
    return j.dump(2);
}

}  // namespace hjh
