#include "hjhomog/fundamental.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace hjh {

long double picard_bound(double K, double T, int n) {
    long double b = 1.0L;
    const long double kt = static_cast<long double>(K) * static_cast<long double>(T);
    for (int i = 1; i <= n; ++i) b *= kt / i;
    return b;
}

std::size_t FundamentalField::slice_at(double t) const {
    const std::size_t k = grid.nearest_slice(t);
    if (std::abs(grid.times[k] - t) > 1e-9 * std::max(1.0, T)) {
        std::ostringstream os;
        os << "time " << t << " is not a stored slice of the fundamental field";
        fail(ErrorCode::Domain, os.str());
    }
    return k;
}

double FundamentalField::value(double t, const Vec& x) const {
    double out = 0.0;
    if (!grid.at(slice_at(t), x, out)) fail(ErrorCode::Domain, "point outside the fundamental field domain");
    return out;
}

namespace {

struct Setup {
    Lattice lat;
    SchemeSpec spec;
    Vec base;
    std::size_t baseIdx = 0;
    int steps = 0;
    int storeEvery = 1;
};

Setup make_setup(const LagrangianView& view, const Vec& y, double T, const GridSpec& g) {
    require(view.dim() == 1 || view.dim() == 2, ErrorCode::InvalidArgument, "bad model dimension");
    require(T > 0.0 && std::isfinite(T), ErrorCode::InvalidArgument, "horizon T must be positive");
    require(g.ppu >= 2 && g.dt > 0.0 && g.substeps >= 1 && g.radius > 0.0 && g.storeEvery >= 1,
            ErrorCode::Config, "invalid fundamental grid settings");
    require(all_finite(y, view.dim()), ErrorCode::InvalidArgument, "base point not finite");
    Setup s;
    s.steps = std::max(1, int(std::ceil(T / g.dt - 1e-9)));
    s.spec.dt = T / s.steps;
    s.spec.substeps = g.substeps;
    s.spec.vmax = g.vmax > 0.0 ? g.vmax : (view.model() ? view.model()->vmax() : 4.0);
    if (view.K() * s.spec.dt >= 1.0) {
        std::ostringstream os;
        os << "time step " << s.spec.dt << " violates dt*K < 1 (K = " << view.K() << ")";
        fail(ErrorCode::Config, os.str());
    }
    const double h = 1.0 / g.ppu;
    const double pad = g.pad >= 0.0 ? g.pad : 2.0 * s.spec.vmax * s.spec.dt + 2.0 * h;
    s.lat = box_lattice(view.dim(), g.ppu, y, g.radius + pad, &s.base);
    if (norm(s.base - y) > 1e-9)
        fail(ErrorCode::Domain, "base point must lie on the lattice (multiples of 1/ppu)");
    std::size_t bi = 0, stride = 1;
    for (int a = 0; a < s.lat.dim; ++a) {
        bi += std::size_t(std::llround(s.base[a] * g.ppu) - s.lat.origin[a]) * stride;
        stride *= std::size_t(s.lat.n[a]);
    }
    s.baseIdx = bi;
    s.storeEvery = g.storeEvery;
    return s;
}

std::vector<double> initial_slice(const Setup& s, double c) {
    std::vector<double> v(s.lat.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = c + kSentinelSlope * (1.0 + norm(s.lat.node(i) - s.base));
    v[s.baseIdx] = c;
    return v;
}

UpdateRegion cone_region(const Setup& s, const SemiLagrangian& sl, double t, double c) {
    UpdateRegion r;
    const double cone = sl.max_speed() * t + s.lat.h();
    const int rk = int(std::ceil(cone * s.lat.ppu)) + 1;
    for (int a = 0; a < s.lat.dim; ++a) {
        const int b = int(std::llround(s.base[a] * s.lat.ppu) - s.lat.origin[a]);
        r.lo[a] = std::max(0, b - rk);
        r.hi[a] = std::min(s.lat.n[a] - 1, b + rk);
    }
    r.guardCenter = s.base;
    r.guardRadius = 0.5 * sl.max_speed() * t;
    r.unreached = c + 0.5 * kSentinelSlope;
    return r;
}

bool keep_slice(const Setup& s, int k) { return k == 0 || k == s.steps || k % s.storeEvery == 0; }

// One full time march. When rArg is non-null, slice k of rArg supplies the
// value-argument of L; otherwise the marching value itself is used.
void march(const Setup& s, const SemiLagrangian& sl, double c, const std::vector<std::vector<double>>* rArg,
           const std::vector<double>* frozen, std::vector<std::vector<double>>& all, bool keepAll,
           GridField& out, std::size_t& counted, std::size_t& boundary) {
    std::vector<double> cur = initial_slice(s, c), next(cur.size());
    out.lattice = s.lat;
    out.times.clear();
    out.slices.clear();
    all.clear();
    if (keepAll) all.push_back(cur);
    out.times.push_back(0.0);
    out.slices.push_back(cur);
    for (int k = 0; k < s.steps; ++k) {
        const double tn = (k + 1) * s.spec.dt;
        UpdateRegion reg = cone_region(s, sl, tn, c);
        const double* R = cur.data();
        if (rArg) R = (*rArg)[k].data();
        else if (frozen) R = frozen->data();
        StepStats st = sl.step(cur.data(), R, next.data(), reg);
        counted += st.counted;
        boundary += st.boundary;
        cur.swap(next);
        if (keepAll) all.push_back(cur);
        if (keep_slice(s, k + 1)) {
            out.times.push_back(k + 1 == s.steps ? s.steps * s.spec.dt : tn);
            out.slices.push_back(cur);
        }
    }
}

FundamentalField wrap(const Setup& s, const SemiLagrangian& sl, const Vec& y, double c, double T) {
    FundamentalField f;
    f.base = s.base;
    (void)y;
    f.c = c;
    f.T = T;
    f.steps = s.steps;
    f.scheme = s.spec;
    f.dv = sl.dv();
    return f;
}

}  // namespace

FundamentalResult solve_m(const LagrangianView& view, const Vec& y, double c, double T, const GridSpec& grid,
                          Scheme scheme, const PicardOptions& picard) {
    require(std::isfinite(c), ErrorCode::InvalidArgument, "base value must be finite");
    Setup s = make_setup(view, y, T, grid);
    SemiLagrangian sl(view, s.lat, s.spec);
    FundamentalResult res;
    res.field = wrap(s, sl, y, c, T);
    res.certificate.K = view.K();
    res.certificate.T = T;
    std::vector<std::vector<double>> all;
    std::size_t counted = 0, boundary = 0;

    if (scheme == Scheme::Marching) {
        march(s, sl, c, nullptr, nullptr, all, false, res.field.grid, counted, boundary);
        check_stencil_guard(counted, boundary);
        res.field.guardCounted = counted;
        res.field.guardBoundary = boundary;
        return res;
    }

    const double cells = double(s.steps + 1) * double(s.lat.size());
    if (cells > 6e7) fail(ErrorCode::Config, "picard mode needs the full space-time field; grid too large");
    require(picard.tol > 0.0 && picard.maxIterations >= 1, ErrorCode::Config, "invalid picard options");

    // phi_0 = 0, phi_1 = A phi_0.
    const std::vector<double> zeros(s.lat.size(), 0.0);
    std::vector<std::vector<double>> prev, cur;
    GridField scratch;
    march(s, sl, c, nullptr, &zeros, prev, true, scratch, counted, boundary);
    const double unreached = c + 0.5 * kSentinelSlope;
    auto& cert = res.certificate;
    for (int n = 1; n <= picard.maxIterations; ++n) {
        counted = boundary = 0;
        march(s, sl, c, &prev, nullptr, cur, true, res.field.grid, counted, boundary);
        double resid = 0.0;
        for (std::size_t k = 0; k < cur.size(); ++k)
            for (std::size_t i = 0; i < cur[k].size(); ++i)
                if (cur[k][i] < unreached && prev[k][i] < unreached)
                    resid = std::max(resid, std::abs(cur[k][i] - prev[k][i]));
        const long double bound = picard_bound(view.K(), T, n);
        cert.residuals.push_back(resid);
        cert.bounds.push_back(bound);
        cert.iterations = n;
        cert.empiricalResidual = resid;
        cert.theoreticalBound = bound;
        prev.swap(cur);
        if (resid < picard.tol && bound <= picard.tol) {
            cert.converged = true;
            break;
        }
    }
    check_stencil_guard(counted, boundary);
    res.field.guardCounted = counted;
    res.field.guardBoundary = boundary;
    return res;
}

FundamentalField solve_m0(const LagrangianView& view, const Vec& y, double T, const GridSpec& grid) {
    Setup s = make_setup(view, y, T, grid);
    SemiLagrangian sl(view, s.lat, s.spec);
    FundamentalField f = wrap(s, sl, y, 0.0, T);
    const std::vector<double> zeros(s.lat.size(), 0.0);
    std::vector<std::vector<double>> all;
    std::size_t counted = 0, boundary = 0;
    march(s, sl, 0.0, nullptr, &zeros, all, false, f.grid, counted, boundary);
    check_stencil_guard(counted, boundary);
    f.guardCounted = counted;
    f.guardBoundary = boundary;
    return f;
}

BdmeResult bdme_check(const FundamentalField& field, const LagrangianView& view, double M0) {
    require(M0 > 0.0, ErrorCode::InvalidArgument, "bdme_check needs M0 > 0");
    BdmeResult r;
    const double tol = field.tolerance();
    const Lattice& lat = field.grid.lattice;
    for (std::size_t k = 1; k < field.grid.slices.size(); ++k) {
        const double t = field.grid.times[k];
        const auto& sl = field.grid.slices[k];
        for (std::size_t i = 0; i < sl.size(); ++i) {
            if (!field.reached(sl[i])) continue;
            if (norm(lat.node(i) - field.base) > M0 * t) continue;
            const double dev = std::abs(sl[i] - field.c) - tol;
            r.C = std::max(r.C, dev / t);
        }
    }
    // Analytic bound from L(y, 0, v) on samples.
    const int dim = view.dim();
    const int ny = 16, nv = 64;
    double supAbs = 0.0, inf = 1e300;
    const double vwide = 2.0 * std::max(M0, view.model() ? view.model()->vmax() : M0);
    for (int i = 0; i < ny; ++i)
        for (int j = 0; j < (dim == 2 ? ny : 1); ++j) {
            Vec yy{double(i) / ny, double(j) / ny};
            for (int a = 0; a < (dim == 2 ? 8 : 2); ++a) {
                const double ang = kTwoPi * a / (dim == 2 ? 8 : 2);
                Vec dir{std::cos(ang), dim == 2 ? std::sin(ang) : 0.0};
                for (int q = 0; q <= nv; ++q) {
                    const double sM = M0 * q / nv, sW = vwide * q / nv;
                    supAbs = std::max(supAbs, std::abs(view.L(yy, 0.0, sM * dir)));
                    inf = std::min(inf, view.L(yy, 0.0, sW * dir));
                }
            }
        }
    r.bound = std::max(supAbs + view.K(), -inf + view.K());
    r.pass = r.C <= r.bound;
    return r;
}

namespace {

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace

SubadditivityReport subadditivity_probe(const LagrangianView& view, const Vec& y, double c, double t,
                                        const std::vector<std::pair<int, int>>& pairs, const GridSpec& grid) {
    require(!pairs.empty() && t > 0.0, ErrorCode::InvalidArgument, "subadditivity_probe: empty sweep");
    std::map<int, double> mAt;  // scale k -> m(k t, 0, k y, k c)
    std::vector<int> scales;
    for (auto [s, l] : pairs) {
        require(s >= 1 && l >= 1, ErrorCode::InvalidArgument, "scales must be positive integers");
        require(std::max(s, l) * t >= 1.0, ErrorCode::InvalidArgument, "probe needs max(sigma t, l t) >= 1");
        scales.insert(scales.end(), {s, l, s + l, 2 * s});
    }
    const Vec origin{0.0, 0.0};
    for (int k : scales) {
        if (mAt.count(k)) continue;
        const Vec base = double(k) * y;
        GridSpec g = grid;
        g.radius = norm(base) + 2.0 / grid.ppu + 0.5;
        g.storeEvery = 1 << 30;
        FundamentalResult r = solve_m(view, base, k * c, k * t, g);
        const double vm = r.field.dv * std::floor(r.field.scheme.vmax / r.field.dv + 1e-9);
        if (norm(base) > vm * k * t) fail(ErrorCode::Domain, "subadditivity probe: |y| exceeds the cone radius");
        double val = r.field.value(r.field.T, origin);
        if (!r.field.reached(val)) fail(ErrorCode::Domain, "subadditivity probe: origin not reached");
        mAt[k] = val;
    }
    SubadditivityReport rep;
    std::vector<double> xs, ys, xp, yp;
    double cmax = -1e300;
    for (auto [s, l] : pairs) {
        const double d = mAt[s + l] - mAt[s] - mAt[l];
        rep.sub.push_back({s, l, d});
        xs.push_back(std::log2(double(s + l)));
        ys.push_back(d);
        cmax = std::max(cmax, d);
    }
    std::vector<int> sig;
    for (auto [s, l] : pairs)
        if (std::find(sig.begin(), sig.end(), s) == sig.end()) sig.push_back(s);
    std::sort(sig.begin(), sig.end());
    for (int s : sig) {
        const double d = 2.0 * mAt[s] - mAt[2 * s];
        rep.sup.push_back({s, s, d});
        xp.push_back(std::log2(double(2 * s)));
        yp.push_back(d);
        cmax = std::max(cmax, d);
    }
    rep.fittedC = cmax;
    rep.subSlope = regression_slope(xs, ys);
    rep.supSlope = regression_slope(xp, yp);
    rep.pass = std::isfinite(cmax) && rep.subSlope < 0.05 && rep.supSlope < 0.05;
    return rep;
}

std::vector<std::string> write_field_csv(const FundamentalField& field, const std::string& dir,
                                         const std::string& prefix) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> paths;
    const Lattice& lat = field.grid.lattice;
    for (std::size_t k = 0; k < field.grid.slices.size(); ++k) {
        std::ostringstream name;
        name << dir << "/" << prefix << "_slice" << k << ".csv";
        std::ofstream os(name.str());
        os.precision(17);
        os << (lat.dim == 1 ? "x,m\n" : "x1,x2,m\n");
        const auto& sl = field.grid.slices[k];
        for (std::size_t i = 0; i < sl.size(); ++i) {
            const Vec x = lat.node(i);
            os << x[0] << ",";
            if (lat.dim == 2) os << x[1] << ",";
            os << sl[i] << "\n";
        }
        paths.push_back(name.str());
    }
    return paths;
}

namespace {
template <class T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T take(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) fail(ErrorCode::InvalidArgument, "truncated binary field");
    return v;
}
}  // namespace

void write_field_binary(const FundamentalField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    require(bool(os), ErrorCode::InvalidArgument, "cannot open " + path);
    const Lattice& lat = f.grid.lattice;
    os.write("HJHF", 4);
    put<std::uint32_t>(os, 1);
    put<std::uint32_t>(os, std::uint32_t(lat.dim));
    put<std::uint32_t>(os, std::uint32_t(lat.ppu));
    put<std::int64_t>(os, lat.origin[0]);
    put<std::int64_t>(os, lat.origin[1]);
    put<std::uint32_t>(os, std::uint32_t(lat.n[0]));
    put<std::uint32_t>(os, std::uint32_t(lat.n[1]));
    put<std::uint32_t>(os, std::uint32_t(f.grid.slices.size()));
    put<double>(os, f.base[0]);
    put<double>(os, f.base[1]);
    put<double>(os, f.c);
    for (double t : f.grid.times) put<double>(os, t);
    for (const auto& sl : f.grid.slices) os.write(reinterpret_cast<const char*>(sl.data()), sl.size() * sizeof(double));
}

FundamentalField read_field_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(bool(is), ErrorCode::InvalidArgument, "cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    require(is && std::memcmp(magic, "HJHF", 4) == 0, ErrorCode::InvalidArgument, "not a binary field file");
    require(take<std::uint32_t>(is) == 1, ErrorCode::InvalidArgument, "unsupported binary field version");
    FundamentalField f;
    Lattice& lat = f.grid.lattice;
    lat.dim = int(take<std::uint32_t>(is));
    lat.ppu = int(take<std::uint32_t>(is));
    lat.origin[0] = take<std::int64_t>(is);
    lat.origin[1] = take<std::int64_t>(is);
    lat.n[0] = int(take<std::uint32_t>(is));
    lat.n[1] = int(take<std::uint32_t>(is));
    const std::uint32_t ns = take<std::uint32_t>(is);
    f.base[0] = take<double>(is);
    f.base[1] = take<double>(is);
    f.c = take<double>(is);
    for (std::uint32_t k = 0; k < ns; ++k) f.grid.times.push_back(take<double>(is));
    f.grid.slices.assign(ns, std::vector<double>(lat.size()));
    for (auto& sl : f.grid.slices) {
        is.read(reinterpret_cast<char*>(sl.data()), std::streamsize(sl.size() * sizeof(double)));
        require(bool(is), ErrorCode::InvalidArgument, "truncated binary field");
    }
    f.T = f.grid.times.empty() ? 0.0 : f.grid.times.back();
    f.steps = int(ns) - 1;
    return f;
}

}  // namespace hjh
