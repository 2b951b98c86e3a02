#include "hjhomog/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "hjhomog/fundamental.hpp"

namespace hjh {

namespace {

double periodic_offset(double d, int period) { return d - period * std::round(d / period); }

double component_value(const PhiComponent& c, const Vec& x, int dim, int period) {
    switch (c.kind) {
        case PhiKind::Constant:
            return c.amplitude;
        case PhiKind::Sinusoid: {
            double s = 0.0;
            for (int a = 0; a < dim; ++a) s += std::sin(kTwoPi * c.frequency * x[a] + c.phase);
            return c.amplitude * s;
        }
        case PhiKind::Bump:
        case PhiKind::Well: {
            Vec d{0.0, 0.0};
            for (int a = 0; a < dim; ++a) d[a] = periodic_offset(x[a] - c.center[a], period);
            const double b = c.amplitude * std::max(0.0, 1.0 - norm(d) / c.width);
            return c.kind == PhiKind::Bump ? b : -b;
        }
    }
    return 0.0;
}

void validate_datum(const InitialDatum& phi, int dim) {
    require(phi.period >= 1, ErrorCode::Config, "initial datum period must be a positive integer");
    require(all_finite(phi.tilt, dim) && std::isfinite(phi.offset), ErrorCode::Config,
            "initial datum tilt and offset must be finite");
    for (const auto& c : phi.parts) {
        require(std::isfinite(c.amplitude) && std::isfinite(c.phase) && all_finite(c.center, dim), ErrorCode::Config,
                "initial datum component is not finite");
        if (c.kind == PhiKind::Sinusoid)
            require(c.frequency >= 1, ErrorCode::Config, "sinusoid frequency must be a positive integer");
        if (c.kind == PhiKind::Bump || c.kind == PhiKind::Well)
            require(c.width > 0.0 && c.width <= 0.5 * phi.period, ErrorCode::Config,
                    "bump width must lie in (0, period/2]");
    }
}

}  // namespace

double InitialDatum::periodic_part(const Vec& x, int dim) const {
    double v = offset;
    for (const auto& c : parts) v += component_value(c, x, dim, period);
    return v;
}

double InitialDatum::operator()(const Vec& x, int dim) const {
    return dot(tilt, x) + periodic_part(x, dim);
}

double InitialDatum::lipschitz(int dim) const {
    double l = norm(tilt);
    for (const auto& c : parts) {
        if (c.kind == PhiKind::Sinusoid) l += std::abs(c.amplitude) * kTwoPi * c.frequency * std::sqrt(double(dim));
        if (c.kind == PhiKind::Bump || c.kind == PhiKind::Well) l += std::abs(c.amplitude) / c.width;
    }
    return l;
}

double InitialDatum::sup_abs_periodic(int dim) const {
    double s = std::abs(offset);
    for (const auto& c : parts) s += std::abs(c.amplitude) * (c.kind == PhiKind::Sinusoid ? dim : 1);
    return s;
}

InitialDatum InitialDatum::constant(double a) {
    InitialDatum d;
    d.offset = a;
    return d;
}

InitialDatum InitialDatum::affine(const Vec& p) {
    InitialDatum d;
    d.tilt = p;
    return d;
}

InitialDatum InitialDatum::sinusoid(double amplitude, int frequency, double phase) {
    InitialDatum d;
    PhiComponent c;
    c.kind = PhiKind::Sinusoid;
    c.amplitude = amplitude;
    c.frequency = frequency;
    c.phase = phase;
    d.parts.push_back(c);
    return d;
}

InitialDatum InitialDatum::bump(double height, double width, int period, const Vec& center) {
    InitialDatum d;
    d.period = period;
    PhiComponent c;
    c.kind = PhiKind::Bump;
    c.amplitude = height;
    c.width = width;
    c.center = center;
    d.parts.push_back(c);
    return d;
}

InitialDatum InitialDatum::well(double depth, double width, int period, const Vec& center) {
    InitialDatum d = bump(depth, width, period, center);
    d.parts.back().kind = PhiKind::Well;
    return d;
}

const char* backend_name(Backend b) { return b == Backend::Rescaled ? "rescaled" : "composition"; }

std::size_t SolutionField::slice_at(double t) const {
    const std::size_t k = grid.nearest_slice(t);
    if (std::abs(grid.times[k] - t) > 1e-9 * std::max(1.0, grid.times.back())) {
        std::ostringstream os;
        os << "time " << t << " is not a stored slice of the solution";
        fail(ErrorCode::Domain, os.str());
    }
    return k;
}

double SolutionField::value(std::size_t slice, const Vec& x) const {
    double w = 0.0;
    grid.at(slice, x, w);
    return w + dot(tilt, x);
}

namespace {

struct Plan {
    int dim = 1;
    double eps = 1.0;
    int cells = 1;
    int ppuPhys = 1;
    Lattice cellLat, physLat;
    SchemeSpec spec;
    int steps = 1;
    int outEvery = 1;
    double tauT = 0.0;
};

int integral(double v, const char* what) {
    const double r = std::round(v);
    if (r < 1.0 || std::abs(v - r) > 1e-9 * std::max(1.0, r)) {
        std::ostringstream os;
        os << what << " must be a positive integer (got " << v << ")";
        fail(ErrorCode::Config, os.str());
    }
    return int(r);
}

Plan make_plan(const CauchyProblem& prob) {
    Plan p;
    p.dim = prob.view.dim();
    const CauchyGrid& g = prob.grid;
    validate_datum(prob.phi, p.dim);
    require(prob.epsilon > 0.0 && prob.epsilon <= 1.0, ErrorCode::Config, "epsilon must lie in (0, 1]");
    require(prob.T > 0.0 && std::isfinite(prob.T), ErrorCode::Config, "horizon T must be positive");
    if (g.ppc < 16) {
        std::ostringstream os;
        os << "grid resolves a unit cell with " << g.ppc << " points; at least 16 are required";
        fail(ErrorCode::Config, os.str());
    }
    require(g.dtau > 0.0 && g.substeps >= 1 && g.outputDt > 0.0, ErrorCode::Config, "invalid cauchy grid");
    p.eps = prob.epsilon;
    p.cells = integral(prob.phi.period / p.eps, "period/epsilon");
    p.ppuPhys = integral(g.ppc / p.eps, "points per cell / epsilon");
    for (int a = 0; a < p.dim; ++a) {
        const double k = prob.phi.tilt[a] * p.cells;
        if (std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, std::abs(k)))
            fail(ErrorCode::Config, "tilt times period/epsilon must be an integer on every axis");
    }
    p.cellLat = periodic_lattice(p.dim, g.ppc, {p.cells, p.cells});
    p.physLat = periodic_lattice(p.dim, p.ppuPhys, {prob.phi.period, prob.phi.period});
    p.tauT = prob.T / p.eps;
    p.steps = std::max(1, int(std::ceil(p.tauT / g.dtau - 1e-9)));
    p.spec.dt = p.tauT / p.steps;
    p.spec.substeps = g.substeps;
    const HamiltonianModel* m = prob.view.model();
    p.spec.vmax = g.vmax > 0.0 ? g.vmax : (m ? m->default_vmax(prob.phi.lipschitz(p.dim)) : 4.0);
    if (prob.view.K() * p.spec.dt >= 1.0) {
        std::ostringstream os;
        os << "cell time step " << p.spec.dt << " violates dt*K < 1 (K = " << prob.view.K() << ")";
        fail(ErrorCode::Config, os.str());
    }
    p.outEvery = std::max(1, int(std::llround(g.outputDt / (p.eps * p.spec.dt))));
    return p;
}

bool keep(const Plan& p, int k) { return k == 0 || k == p.steps || k % p.outEvery == 0; }

SolutionField empty_field(const CauchyProblem& prob, const Plan& p, Backend b) {
    SolutionField f;
    f.backend = b;
    f.epsilon = p.eps;
    f.dim = p.dim;
    f.grid.lattice = p.physLat;
    f.tilt = prob.phi.tilt;
    f.dx = 1.0 / p.ppuPhys;
    f.dt = p.eps * p.spec.dt;
    return f;
}

void store(SolutionField& f, const Plan& p, int k, const std::vector<double>& w) {
    std::vector<double> u(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) u[i] = p.eps * w[i];
    f.grid.times.push_back(k == p.steps ? p.eps * p.tauT : p.eps * k * p.spec.dt);
    f.grid.slices.push_back(std::move(u));
}

SolutionField solve_rescaled(const CauchyProblem& prob, const Plan& p) {
    SolutionField f = empty_field(prob, p, Backend::Rescaled);
    SemiLagrangian sl(prob.view, p.cellLat, p.spec, prob.phi.tilt);
    f.dv = sl.dv();
    std::vector<double> cur(p.cellLat.size()), next(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i)
        cur[i] = prob.phi.periodic_part(p.eps * p.cellLat.node(i), p.dim) / p.eps;
    store(f, p, 0, cur);
    for (int k = 1; k <= p.steps; ++k) {
        const StepStats st = sl.step(cur.data(), cur.data(), next.data());
        f.guardCounted += st.counted;
        f.guardBoundary += st.boundary;
        cur.swap(next);
        for (double v : cur)
            if (!std::isfinite(v)) fail(ErrorCode::Numeric, "non-finite value in the rescaled march");
        if (keep(p, k)) store(f, p, k, cur);
    }
    check_stencil_guard(f.guardCounted, f.guardBoundary);
    return f;
}

struct CachedSolve {
    double c = 0.0;
    std::array<std::int64_t, kMaxDim> base{0, 0};
    FundamentalField field;
};

SolutionField solve_composition(const CauchyProblem& prob, const Plan& p) {
    SolutionField f = empty_field(prob, p, Backend::Composition);
    const int ppc = prob.grid.ppc;
    GridSpec g;
    g.ppu = ppc;
    g.dt = p.spec.dt;
    g.substeps = p.spec.substeps;
    g.vmax = p.spec.vmax;
    g.storeEvery = p.outEvery;
    {
        SemiLagrangian probe(prob.view, box_lattice(p.dim, ppc, {0.0, 0.0}, 1.0), p.spec);
        g.radius = probe.max_speed() * p.tauT + 1.0 / ppc;
        f.dv = probe.dv();
    }
    const Vec tilt = prob.phi.tilt;
    const std::size_t nodes = p.cellLat.size();
    const std::int64_t n0 = p.cellLat.n[0], n1 = p.dim == 2 ? p.cellLat.n[1] : 1;
    std::vector<std::vector<double>> w;
    std::vector<double> times;

    // Bases sharing a lattice residue and an integer value offset reuse one solve.
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<CachedSolve>> cache;
    for (std::size_t b = 0; b < nodes; ++b) {
        const std::array<std::int64_t, kMaxDim> gb{std::int64_t(b % std::size_t(n0)),
                                                   std::int64_t(b / std::size_t(n0))};
        const Vec yb = p.cellLat.node(b);
        const double cb = prob.phi(p.eps * yb, p.dim) / p.eps;
        auto& bucket = cache[{gb[0] % ppc, gb[1] % ppc}];
        const CachedSolve* hit = nullptr;
        for (const auto& cs : bucket) {
            const double d = cb - cs.c;
            if (std::abs(d - std::round(d)) <= 1e-12 * std::max(1.0, std::abs(cb))) {
                hit = &cs;
                break;
            }
        }
        if (!hit) {
            CachedSolve cs;
            cs.c = cb;
            cs.base = gb;
            cs.field = solve_m(prob.view, yb, cb, p.tauT, g).field;
            f.guardCounted += cs.field.guardCounted;
            f.guardBoundary += cs.field.guardBoundary;
            bucket.push_back(std::move(cs));
            hit = &bucket.back();
        }
        const FundamentalField& m = hit->field;
        const double lift = std::round(cb - hit->c);
        const std::int64_t sh0 = gb[0] - hit->base[0], sh1 = gb[1] - hit->base[1];
        if (w.empty()) {
            w.assign(m.grid.slices.size(), std::vector<double>(nodes, 1e300));
            times = m.grid.times;
        }
        const Lattice& bl = m.grid.lattice;
        for (std::size_t k = 0; k < m.grid.slices.size(); ++k) {
            const auto& sl = m.grid.slices[k];
            auto& wk = w[k];
            for (std::size_t i = 0; i < sl.size(); ++i) {
                if (!m.reached(sl[i])) continue;
                const std::int64_t z0 = bl.origin[0] + std::int64_t(i % std::size_t(bl.n[0])) + sh0;
                const std::int64_t z1 = p.dim == 2 ? bl.origin[1] + std::int64_t(i / std::size_t(bl.n[0])) + sh1 : 0;
                const double px = (tilt[0] * double(z0) + tilt[1] * double(z1)) / ppc;
                const std::size_t node = std::size_t(floor_mod(z0, n0) + n0 * floor_mod(z1, n1));
                wk[node] = std::min(wk[node], sl[i] + lift - px);
            }
        }
    }
    for (std::size_t k = 0; k < w.size(); ++k) {
        for (double v : w[k])
            if (!(v < 1e299)) fail(ErrorCode::Numeric, "composition left lattice nodes unreached");
        std::vector<double> u(nodes);
        for (std::size_t i = 0; i < nodes; ++i) u[i] = p.eps * w[k][i];
        f.grid.times.push_back(p.eps * times[k]);
        f.grid.slices.push_back(std::move(u));
    }
    return f;
}

}  // namespace

SolutionField solve_cauchy(const CauchyProblem& prob, Backend backend) {
    const Plan p = make_plan(prob);
    return backend == Backend::Rescaled ? solve_rescaled(prob, p) : solve_composition(prob, p);
}

double envelope_constant(const HamiltonianModel& model, double lip) {
    const int dim = model.dim();
    const int ny = 16, nr = 16, np = 16, na = dim == 2 ? 16 : 2;
    double M = 0.0;
    for (int i = 0; i < ny; ++i)
        for (int j = 0; j < (dim == 2 ? ny : 1); ++j) {
            const Vec y{double(i) / ny, double(j) / ny};
            for (int r = 0; r < nr; ++r)
                for (int a = 0; a < na; ++a) {
                    const double ang = kTwoPi * a / na;
                    const Vec dir{std::cos(ang), dim == 2 ? std::sin(ang) : 0.0};
                    for (int q = 0; q <= np; ++q)
                        M = std::max(M, std::abs(model.H(y, double(r) / nr, (lip * q / np) * dir)));
                }
        }
    return M;
}

EnvelopeResult envelope_check(const SolutionField& field, const CauchyProblem& prob) {
    require(prob.view.model() != nullptr, ErrorCode::InvalidArgument, "envelope_check needs an analytic model");
    EnvelopeResult r;
    r.M = envelope_constant(*prob.view.model(), prob.phi.lipschitz(field.dim));
    r.tol = field.tolerance();
    r.upper = r.lower = -1e300;
    const Lattice& lat = field.grid.lattice;
    for (std::size_t k = 0; k < field.grid.slices.size(); ++k) {
        const double t = field.grid.times[k];
        const auto& sl = field.grid.slices[k];
        for (std::size_t i = 0; i < sl.size(); ++i) {
            const Vec x = lat.node(i);
            const double phi = prob.phi.periodic_part(x, field.dim);
            r.upper = std::max(r.upper, sl[i] - phi - r.M * t);
            r.lower = std::max(r.lower, phi - r.M * t - sl[i]);
        }
    }
    r.pass = r.upper <= r.tol && r.lower <= r.tol;
    return r;
}

ExpansivenessResult expansiveness_check(const SolutionField& field, const CauchyProblem& prob, double s, double t,
                                        double slack) {
    require(prob.view.model() != nullptr, ErrorCode::InvalidArgument, "expansiveness_check needs an analytic model");
    require(s > 0.0 && t >= 0.0, ErrorCode::InvalidArgument, "expansiveness_check needs s > 0 and t >= 0");
    const auto& a = field.grid.slices[field.slice_at(t)];
    const auto& b = field.grid.slices[field.slice_at(t + s)];
    ExpansivenessResult r;
    for (std::size_t i = 0; i < a.size(); ++i) r.gap = std::max(r.gap, std::abs(b[i] - a[i]));
    const double M = envelope_constant(*prob.view.model(), prob.phi.lipschitz(field.dim));
    r.bound = std::exp(prob.view.K() * t / field.epsilon) * M * s;
    r.ratio = r.bound > 0.0 ? r.gap / r.bound : (r.gap > 0.0 ? 1e300 : 0.0);
    r.pass = r.ratio <= 1.0 + slack;
    return r;
}

double field_gap(const SolutionField& a, const SolutionField& b) {
    const Lattice& la = a.grid.lattice;
    const Lattice& lb = b.grid.lattice;
    require(la.dim == lb.dim && la.ppu == lb.ppu && la.n == lb.n, ErrorCode::InvalidArgument,
            "field_gap needs identical lattices");
    require(a.tilt == b.tilt, ErrorCode::InvalidArgument, "field_gap needs identical tilts");
    double gap = 0.0;
    std::size_t matched = 0;
    for (std::size_t k = 0; k < a.grid.times.size(); ++k)
        for (std::size_t j = 0; j < b.grid.times.size(); ++j) {
            if (std::abs(a.grid.times[k] - b.grid.times[j]) > 1e-9) continue;
            ++matched;
            for (std::size_t i = 0; i < a.grid.slices[k].size(); ++i)
                gap = std::max(gap, std::abs(a.grid.slices[k][i] - b.grid.slices[j][i]));
        }
    require(matched > 0, ErrorCode::InvalidArgument, "field_gap: no common stored times");
    return gap;
}

std::vector<std::string> write_solution_csv(const SolutionField& field, const std::string& dir,
                                            const std::string& prefix) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> paths;
    const Lattice& lat = field.grid.lattice;
    for (std::size_t k = 0; k < field.grid.slices.size(); ++k) {
        std::ostringstream name;
        name << dir << "/" << prefix << "_slice" << k << ".csv";
        std::ofstream os(name.str());
        require(bool(os), ErrorCode::InvalidArgument, "cannot write " + name.str());
        os.precision(17);
        os << (lat.dim == 1 ? "t,x,u\n" : "t,x1,x2,u\n");
        const auto& sl = field.grid.slices[k];
        for (std::size_t i = 0; i < sl.size(); ++i) {
            const Vec x = lat.node(i);
            os << field.grid.times[k] << "," << x[0] << ",";
            if (lat.dim == 2) os << x[1] << ",";
            os << sl[i] + dot(field.tilt, x) << "\n";
        }
        paths.push_back(name.str());
    }
    return paths;
}

}  // namespace hjh
