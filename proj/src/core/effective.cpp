#include "hjhomog/effective.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace hjh {

namespace {

std::size_t zero_index(const std::vector<double>& ax) {
    for (std::size_t i = 0; i < ax.size(); ++i)
        if (std::abs(ax[i]) < 1e-12) return i;
    fail(ErrorCode::InvalidArgument, "velocity axis must contain 0");
}

void check_axis(const std::vector<double>& ax, const char* what) {
    require(!ax.empty(), ErrorCode::InvalidArgument, std::string(what) + " axis is empty");
    for (std::size_t i = 0; i < ax.size(); ++i) {
        require(std::isfinite(ax[i]), ErrorCode::InvalidArgument, std::string(what) + " axis is not finite");
        if (i > 0) require(ax[i] > ax[i - 1], ErrorCode::InvalidArgument, std::string(what) + " axis must increase");
    }
}

}  // namespace

double EffectiveTable::vmax() const {
    double m = std::min(-Lbar.axis[0].front(), Lbar.axis[0].back());
    if (dim == 2) m = std::min({m, -Lbar.axis[1].front(), Lbar.axis[1].back()});
    return m;
}

double EffectiveTable::Lbar_at(const Vec& v) const {
    double out = 0.0;
    if (!Lbar.interpolate(v, out)) fail(ErrorCode::Domain, "velocity outside the effective table");
    return out;
}

double EffectiveTable::Hbar_at(const Vec& p) const {
    require(!Hbar.values.empty(), ErrorCode::InvalidArgument, "effective Hamiltonian not estimated yet");
    double out = 0.0;
    if (!Hbar.interpolate(p, out)) fail(ErrorCode::Domain, "momentum outside the effective table");
    return out;
}

bool EffectiveTable::flagged_near(const Vec& v) const {
    const std::size_t n0 = Lbar.n(0);
    std::size_t lo[kMaxDim] = {0, 0}, hi[kMaxDim] = {0, 0};
    for (int a = 0; a < dim; ++a) {
        const auto& ax = Lbar.axis[a];
        auto it = std::lower_bound(ax.begin(), ax.end(), v[a]);
        hi[a] = std::min<std::size_t>(std::size_t(it - ax.begin()), ax.size() - 1);
        lo[a] = hi[a] > 0 ? hi[a] - 1 : 0;
    }
    for (std::size_t j = lo[1]; j <= hi[1]; ++j)
        for (std::size_t i = lo[0]; i <= hi[0]; ++i)
            if (unstable[i + n0 * j]) return true;
    return false;
}

std::string EffectiveTable::Lbar_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << (dim == 1 ? "v,Lbar,gap\n" : "v1,v2,Lbar,gap\n");
    for (std::size_t i = 0; i < Lbar.size(); ++i) {
        const Vec v = Lbar.point(i);
        os << v[0] << ",";
        if (dim == 2) os << v[1] << ",";
        os << Lbar.values[i] << "," << gap[i] << "\n";
    }
    return os.str();
}

std::string EffectiveTable::Hbar_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << (dim == 1 ? "p,Hbar,flag\n" : "p1,p2,Hbar,flag\n");
    for (std::size_t i = 0; i < Hbar.size(); ++i) {
        const Vec p = Hbar.point(i);
        os << p[0] << ",";
        if (dim == 2) os << p[1] << ",";
        os << Hbar.values[i] << "," << (HbarUnattained[i] ? 1 : 0) << "\n";
    }
    return os.str();
}

EffectiveTable estimate_Lbar(const LagrangianView& view, const std::vector<double>& vAxis,
                             const std::vector<double>& epsList, const GridSpec& grid, double c) {
    check_axis(vAxis, "velocity");
    require(!epsList.empty(), ErrorCode::InvalidArgument, "epsilon list is empty");
    for (std::size_t k = 0; k < epsList.size(); ++k) {
        require(epsList[k] > 0.0 && epsList[k] <= 1.0, ErrorCode::InvalidArgument, "epsilon must lie in (0, 1]");
        if (k > 0) require(epsList[k] < epsList[k - 1], ErrorCode::InvalidArgument, "epsilon list must decrease");
    }
    const int dim = view.dim();
    const double tauMax = 1.0 / epsList.back();
    const int steps = std::max(1, int(std::ceil(tauMax / grid.dt - 1e-9)));
    const double dt = tauMax / steps;
    std::vector<int> idx;
    for (double e : epsList) {
        const double k = (1.0 / e) / dt;
        if (std::abs(k - std::round(k)) > 1e-6)
            fail(ErrorCode::Config, "1/epsilon must be a multiple of the time step for every epsilon");
        idx.push_back(int(std::round(k)));
    }
    int g = 0;
    for (int k : idx) g = std::gcd(g, k);

    const double vAbs = std::max(std::abs(vAxis.front()), std::abs(vAxis.back()));
    GridSpec spec = grid;
    spec.radius = vAbs * tauMax + 2.0 / grid.ppu;
    spec.storeEvery = g;
    {
        const double s = view.model() && grid.vmax <= 0.0 ? view.model()->vmax() : grid.vmax;
        require(s > 0.0, ErrorCode::Config, "estimate_Lbar needs a positive vmax");
        spec.vmax = s;
        if (vAbs * std::sqrt(double(dim)) > s)
            fail(ErrorCode::Config, "velocity axis exceeds the stencil radius vmax");
    }
    FundamentalResult res = solve_m(view, {0.0, 0.0}, c, tauMax, spec);
    const FundamentalField& m = res.field;

    EffectiveTable t;
    t.dim = dim;
    t.Lbar.dim = dim;
    t.Lbar.axis[0] = vAxis;
    if (dim == 2) t.Lbar.axis[1] = vAxis;
    t.epsList = epsList;
    t.baseValue = c;
    t.schemeTolerance = m.tolerance() / tauMax;
    const std::size_t n = t.Lbar.size();
    for (double e : epsList) {
        const double tau = 1.0 / e;
        std::vector<double> est(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double val = m.value(tau, tau * t.Lbar.point(i));
            if (!m.reached(val)) fail(ErrorCode::Domain, "velocity sample outside the reachable cone");
            est[i] = (val - c) / tau;
        }
        t.perEps.push_back(std::move(est));
    }
    t.Lbar.values = t.perEps.back();
    t.gap.assign(n, 0.0);
    t.unstable.assign(n, false);
    const std::size_t K = t.perEps.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (K >= 2) t.gap[i] = std::abs(t.perEps[K - 1][i] - t.perEps[K - 2][i]);
        if (K >= 3) {
            const double prev = std::abs(t.perEps[K - 2][i] - t.perEps[K - 3][i]);
            t.unstable[i] = t.gap[i] > 1.25 * prev + 1e-9;
        }
    }
    return t;
}

void estimate_Hbar(EffectiveTable& t, const std::vector<double>& pAxis) {
    check_axis(pAxis, "momentum");
    t.Hbar = SampleGrid{};
    t.Hbar.dim = t.dim;
    t.Hbar.axis[0] = pAxis;
    if (t.dim == 2) t.Hbar.axis[1] = pAxis;
    std::vector<Vec> slopes(t.Hbar.size());
    for (std::size_t i = 0; i < slopes.size(); ++i) slopes[i] = t.Hbar.point(i);
    LegendreResult r = legendre_transform(t.Lbar, slopes);
    t.Hbar.values = r.values;
    t.HbarUnattained = r.unattained;
    t.HbarLipschitz.resize(slopes.size());
    for (std::size_t i = 0; i < slopes.size(); ++i) t.HbarLipschitz[i] = norm(r.argmax[i]);
}

double convexity_defect(const EffectiveTable& t) {
    const SampleGrid& s = t.Lbar;
    const std::size_t n0 = s.n(0), n1 = s.n(1);
    double worst = -1e300;
    for (std::size_t a1 = 0; a1 < n1; ++a1)
        for (std::size_t a0 = 0; a0 < n0; ++a0)
            for (std::size_t b1 = a1 % 2; b1 < n1; b1 += 2)
                for (std::size_t b0 = a0 % 2; b0 < n0; b0 += 2) {
                    const std::size_t m0 = (a0 + b0) / 2, m1 = (a1 + b1) / 2;
                    const double mid = s.values[m0 + n0 * m1];
                    const double avg = 0.5 * (s.values[a0 + n0 * a1] + s.values[b0 + n0 * b1]);
                    worst = std::max(worst, mid - avg);
                }
    return worst;
}

double superlinearity_defect(const EffectiveTable& t) {
    const SampleGrid& s = t.Lbar;
    const std::size_t n0 = s.n(0);
    const long z0 = long(zero_index(s.axis[0]));
    const long z1 = t.dim == 2 ? long(zero_index(s.axis[1])) : 0;
    std::vector<std::array<long, 2>> dirs = {{1, 0}, {-1, 0}};
    if (t.dim == 2) dirs.insert(dirs.end(), {{0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}});
    auto inside = [&](long i, long j) { return i >= 0 && i < long(n0) && j >= 0 && j < long(s.n(1)); };
    double worst = 0.0;
    for (const auto& d : dirs) {
        double prev = -1e300;
        for (long k = 1;; ++k) {
            const long i1 = z0 + k * d[0], j1 = z1 + k * d[1];
            const long i2 = z0 + 2 * k * d[0], j2 = z1 + 2 * k * d[1];
            if (!inside(i2, j2)) break;
            const std::size_t a = std::size_t(i1) + n0 * std::size_t(j1);
            const std::size_t b = std::size_t(i2) + n0 * std::size_t(j2);
            const double g = (s.values[b] - s.values[a]) / norm(s.point(a));
            if (prev > -1e299) worst = std::max(worst, prev - g);
            prev = g;
        }
    }
    return worst;
}

double legendre_roundtrip_gap(const EffectiveTable& t) {
    require(!t.Hbar.values.empty(), ErrorCode::InvalidArgument, "legendre_roundtrip_gap needs Hbar samples");
    std::vector<Vec> vs(t.Lbar.size());
    for (std::size_t i = 0; i < vs.size(); ++i) vs[i] = t.Lbar.point(i);
    LegendreResult back = legendre_transform(t.Hbar, vs);
    double worst = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i)
        if (!back.unattained[i]) worst = std::max(worst, std::abs(back.values[i] - t.Lbar.values[i]));
    return worst;
}

namespace {

double golden(const std::function<double(double)>& f, double a, double b, double& xbest) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    xbest = fc < fd ? c : d;
    return std::min(fc, fd);
}

}  // namespace

HopfLaxValue hopf_lax(const InitialDatum& phi, const EffectiveTable& table, const Vec& x, double t, double M0,
                      int samplesPerUnit) {
    const int dim = table.dim;
    require(t >= 0.0 && std::isfinite(t) && all_finite(x, dim), ErrorCode::InvalidArgument,
            "hopf_lax needs finite x and t >= 0");
    require(samplesPerUnit >= 4, ErrorCode::InvalidArgument, "hopf_lax needs at least 4 samples per unit");
    HopfLaxValue out;
    if (t == 0.0) {
        out.value = phi(x, dim);
        out.argmin = x;
        return out;
    }
    const double reach = (M0 > 0.0 ? std::min(M0, table.vmax()) : table.vmax()) * t;
    auto cost = [&](const Vec& y) {
        const Vec v = (1.0 / t) * (x - y);
        return phi(y, dim) + t * table.Lbar_at(v);
    };
    if (dim == 1) {
        const int n = std::max(4, int(std::ceil(2.0 * reach * samplesPerUnit)));
        const double h = 2.0 * reach / n;
        double best = 1e300;
        int bk = 0;
        for (int k = 0; k <= n; ++k) {
            const double val = cost({x[0] - reach + k * h, 0.0});
            if (val < best) {
                best = val;
                bk = k;
            }
        }
        const double lo = x[0] - reach + std::max(0, bk - 1) * h;
        const double hi = x[0] - reach + std::min(n, bk + 1) * h;
        double yb = 0.0;
        const double refined = golden([&](double y) { return cost({y, 0.0}); }, lo, hi, yb);
        out.value = std::min(best, refined);
        out.argmin = refined < best ? Vec{yb, 0.0} : Vec{x[0] - reach + bk * h, 0.0};
    } else {
        const int per = std::max(4, samplesPerUnit / 16);
        const int n = std::max(4, int(std::ceil(2.0 * reach * per)));
        const double h = 2.0 * reach / n;
        double best = 1e300;
        Vec by = x;
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                const Vec y{x[0] - reach + i * h, x[1] - reach + j * h};
                const double val = cost(y);
                if (val < best) {
                    best = val;
                    by = y;
                }
            }
        for (int round = 0; round < 4; ++round)
            for (int a = 0; a < 2; ++a) {
                const double lo = std::max(x[a] - reach, by[a] - h), hi = std::min(x[a] + reach, by[a] + h);
                double yb = by[a];
                const double val = golden(
                    [&](double s) {
                        Vec y = by;
                        y[a] = s;
                        return cost(y);
                    },
                    lo, hi, yb);
                if (val < best) {
                    best = val;
                    by[a] = yb;
                }
            }
        out.value = best;
        out.argmin = by;
    }
    out.touchedFlag = table.flagged_near((1.0 / t) * (x - out.argmin));
    return out;
}

std::pair<double, double> loglog_fit(const std::vector<double>& eps, const std::vector<double>& err) {
    require(eps.size() == err.size() && eps.size() >= 2, ErrorCode::InvalidArgument,
            "loglog_fit needs at least two points");
    double mx = 0, my = 0;
    const double n = double(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        require(eps[i] > 0.0 && err[i] > 0.0, ErrorCode::Numeric, "loglog_fit needs positive values");
        mx += std::log(eps[i]);
        my += std::log(err[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double dx = std::log(eps[i]) - mx;
        sxy += dx * (std::log(err[i]) - my);
        sxx += dx * dx;
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

namespace {

struct Reference {
    std::vector<double> times;
    std::vector<std::vector<double>> u;  // per monitor time, per monitor point
};

Reference hopf_lax_reference(const RateOptions& o, const EffectiveTable& table, int points) {
    Reference r;
    for (double t = o.tMin; t <= o.T + 1e-9; t += o.monitorDt) r.times.push_back(t);
    for (double t : r.times) {
        std::vector<double> row(points);
        for (int i = 0; i < points; ++i)
            row[i] = hopf_lax(o.phi, table, {double(i) / o.monitorPerUnit, 0.0}, t).value;
        r.u.push_back(std::move(row));
    }
    return r;
}

double sup_error(const SolutionField& f, const Reference& ref, int perUnit) {
    double e = 0.0;
    for (std::size_t j = 0; j < ref.times.size(); ++j) {
        const std::size_t k = f.slice_at(ref.times[j]);
        for (std::size_t i = 0; i < ref.u[j].size(); ++i)
            e = std::max(e, std::abs(f.value(k, {double(i) / perUnit, 0.0}) - ref.u[j][i]));
    }
    return e;
}

}  // namespace

RateReport rate_experiment(const LagrangianView& view, const RateOptions& o) {
    const auto start = std::chrono::steady_clock::now();
    if (view.dim() != 1) fail(ErrorCode::Unsupported, "the rate experiment monitors one-dimensional problems only");
    require(o.epsList.size() >= 2, ErrorCode::Config, "rate experiment needs at least two epsilons");
    require(o.tMin > 0.0 && o.T > o.tMin && o.monitorDt > 0.0 && o.monitorPerUnit >= 1, ErrorCode::Config,
            "invalid monitoring window");
    require(o.tableTau >= 2.0 && o.tableVmax > 0.0 && o.tableDv > 0.0, ErrorCode::Config,
            "invalid effective-table settings");
    double vmax = o.grid.vmax;
    if (vmax <= 0.0) {
        const HamiltonianModel* m = view.model();
        vmax = m ? m->default_vmax(o.phi.lipschitz(1)) : 4.0;
    }
    const int points = o.phi.period * o.monitorPerUnit;
    const std::vector<double> vAxis = uniform_axis(-o.tableVmax, o.tableVmax, o.tableDv);

    RateReport rep;
    const int levels = o.control ? 2 : 1;
    std::vector<std::vector<double>> errs(levels);
    for (int lv = 0; lv < levels; ++lv) {
        CauchyGrid g = o.grid;
        g.ppc = o.grid.ppc << lv;
        g.dtau = o.grid.dtau / (1 << lv);
        g.vmax = vmax;
        g.outputDt = o.monitorDt;
        GridSpec fs;
        fs.ppu = g.ppc;
        fs.dt = g.dtau;
        fs.substeps = g.substeps;
        fs.vmax = vmax;
        const EffectiveTable table = estimate_Lbar(view, vAxis, {2.0 / o.tableTau, 1.0 / o.tableTau}, fs);
        const Reference ref = hopf_lax_reference(o, table, points);
        for (double eps : o.epsList) {
            CauchyProblem prob{view, o.phi, eps, o.T, g};
            const SolutionField f = solve_cauchy(prob, Backend::Rescaled);
            errs[lv].push_back(sup_error(f, ref, o.monitorPerUnit));
        }
    }
    rep.eps = o.epsList;
    rep.errors = errs[0];
    const auto fit = loglog_fit(rep.eps, rep.errors);
    rep.slope = fit.first;
    rep.intercept = fit.second;
    for (std::size_t i = 0; i < rep.eps.size(); ++i) rep.C = std::max(rep.C, rep.errors[i] / rep.eps[i]);
    rep.controlsPass = true;
    if (o.control) {
        rep.controlErrors = errs[1];
        for (std::size_t i = 0; i < rep.eps.size(); ++i) {
            const double ch = std::abs(errs[1][i] - errs[0][i]) / errs[0][i];
            rep.controlChange.push_back(ch);
            if (!(ch < o.controlThreshold)) rep.controlsPass = false;
        }
    }
    rep.valid = rep.controlsPass;
    rep.pass = rep.valid && rep.slope >= o.slopeLo && rep.slope <= o.slopeHi;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::string RateReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "epsilon,error,control_error,control_change\n";
    for (std::size_t i = 0; i < eps.size(); ++i) {
        os << eps[i] << "," << errors[i] << ",";
        if (i < controlErrors.size()) os << controlErrors[i] << "," << controlChange[i];
        else os << ",";
        os << "\n";
    }
    return os.str();
}

std::string RateReport::to_json() const {
    nlohmann::ordered_json j;
    j["status"] = valid ? (pass ? "PASS" : "FAIL") : "INVALID";
    j["slope"] = slope;
    j["intercept"] = intercept;
    j["C"] = C;
    j["epsilons"] = eps;
    j["errors"] = errors;
    j["controls"] = {{"pass", controlsPass}, {"errors", controlErrors}, {"relative_change", controlChange}};
    j["seconds"] = seconds;
    return j.dump(2);
}

}  // namespace hjh
