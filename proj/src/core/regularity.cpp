#include "hjhomog/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "hjhomog/effective.hpp"

namespace hjh {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

bool try_rational(double x, Rational& out) {
    try {
        out = Rational::from_double(x, 1000);
        return true;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace

double halton(std::uint64_t i, int dim) {
    require(dim >= 0 && dim < int(std::size(kPrimes)), ErrorCode::InvalidArgument, "halton dimension out of range");
    const std::uint64_t b = std::uint64_t(kPrimes[dim]);
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= double(b);
        r += f * double(i % b);
        i /= b;
    }
    return r;
}

std::string HolderSpec::str() const {
    std::ostringstream os;
    if (exact)
        os << "m1=" << m1.str() << " m2=" << m2.str() << " x-exponent=" << xExponentExact.str()
           << " t-exponent=" << tExponentExact.str();
    else
        os << "m1=" << m1d << " m2=" << m2d << " x-exponent=" << xExponent << " t-exponent=" << tExponent;
    return os.str();
}

HolderSpec holder_spec(double q1, double q2) {
    if (!(std::isfinite(q1) && std::isfinite(q2)))
        fail(ErrorCode::Config, "growth exponents must be finite");
    if (q1 <= 1.0) fail(ErrorCode::Config, "growth exponent q1 must exceed 1");
    if (q2 < q1) fail(ErrorCode::Config, "growth exponents need q1 <= q2");
    HolderSpec s;
    s.q1 = q1;
    s.q2 = q2;
    Rational r1, r2;
    s.exact = try_rational(q1, r1) && try_rational(q2, r2);
    if (s.exact) {
        const Rational one(1);
        s.m1 = r2 / (r2 - one);
        s.m2 = r1 / (r1 - one);
        s.xExponentExact = s.m1 / (s.m1 + s.m2 - one);
        s.tExponentExact = s.m1 / (s.m1 + s.m2);
        s.m1d = s.m1.value();
        s.m2d = s.m2.value();
        s.xExponent = s.xExponentExact.value();
        s.tExponent = s.tExponentExact.value();
    } else {
        s.m1d = q2 / (q2 - 1.0);
        s.m2d = q1 / (q1 - 1.0);
        s.xExponent = s.m1d / (s.m1d + s.m2d - 1.0);
        s.tExponent = s.m1d / (s.m1d + s.m2d);
    }
    return s;
}

HolderSpec holder_spec(const HamiltonianModel& model) { return holder_spec(model.q1(), model.q2()); }

ModulusResult measure_modulus(const GridField& field, const Vec& tilt, const HolderSpec& spec,
                              const ModulusOptions& opt) {
    const Lattice& lat = field.lattice;
    require(lat.periodic, ErrorCode::InvalidArgument, "modulus scans need a periodic field");
    require(opt.decades >= 1 && opt.pairs >= 3, ErrorCode::InvalidArgument, "modulus scan needs pairs and strata");
    std::vector<std::size_t> slices;
    for (std::size_t k = 0; k < field.times.size(); ++k)
        if (field.times[k] >= opt.tMin - 1e-12 && field.times[k] <= opt.tMax + 1e-12) slices.push_back(k);
    require(!slices.empty(), ErrorCode::InvalidArgument, "no stored slice inside the modulus time window");

    const int dim = lat.dim;
    const double h = lat.h();
    const std::int64_t n0 = lat.n[0], n1 = dim == 2 ? lat.n[1] : 1;
    const double span = 0.5 * lat.period(0);  // largest spatial offset
    const double tSpan = field.times[slices.back()] - field.times[slices.front()];
    const double dtSlice = slices.size() > 1 ? field.times[slices[1]] - field.times[slices[0]] : 0.0;
    const bool timePairs = slices.size() > 1;

    auto value = [&](std::size_t k, std::int64_t i0, std::int64_t i1) {
        const std::size_t idx = std::size_t(floor_mod(i1, n1)) * std::size_t(n0) + std::size_t(floor_mod(i0, n0));
        const Vec x{double(lat.origin[0] + i0) * h, dim == 2 ? double(lat.origin[1] + i1) * h : 0.0};
        return field.slices[k][idx] + dot(tilt, x);
    };
    // Offset drawn log-uniformly inside stratum s of [lo, hi] split into `decades` bands.
    auto stratified = [&](double u, int s, double lo, double hi) {
        const double a = std::log(lo), b = std::log(hi);
        const double w = (b - a) / opt.decades;
        return std::exp(a + w * (s + u));
    };

    ModulusResult r;
    const int strata = opt.decades;
    std::vector<double> xMaxOsc(strata, 0.0), xMaxDist(strata, 0.0), tMaxOsc(strata, 0.0), tMaxDist(strata, 0.0);
    const std::size_t scatterEvery = std::max<std::size_t>(1, opt.pairs / std::max<std::size_t>(1, opt.scatterRows));

    for (std::size_t j = 0; j < opt.pairs; ++j) {
        const std::uint64_t q = opt.seed + j + 1;
        const int type = timePairs ? int(j % 3) : 0;  // 0 space, 1 time, 2 mixed
        const int stratum = int((j / 3) % std::size_t(strata));
        const std::int64_t b0 = std::int64_t(halton(q, 0) * double(n0));
        const std::int64_t b1 = dim == 2 ? std::int64_t(halton(q, 1) * double(n1)) : 0;
        const std::size_t ks = std::min(slices.size() - 1, std::size_t(halton(q, 2) * double(slices.size())));

        std::int64_t d0 = 0, d1 = 0, dk = 0;
        if (type != 1) {
            const double dist = stratified(halton(q, 3), stratum, h, std::max(span, 2.0 * h));
            const double ang = kTwoPi * halton(q, 4);
            const double c = dim == 2 ? std::cos(ang) : (halton(q, 4) < 0.5 ? -1.0 : 1.0);
            d0 = std::llround(dist * c / h);
            if (dim == 2) d1 = std::llround(dist * std::sin(ang) / h);
            if (d0 == 0 && d1 == 0) d0 = 1;
        }
        if (type != 0) {
            const double dist = stratified(halton(q, 5), stratum, dtSlice, std::max(tSpan, 2.0 * dtSlice));
            dk = std::max<std::int64_t>(1, std::llround(dist / dtSlice));
            dk = std::min<std::int64_t>(dk, std::int64_t(slices.size()) - 1);
        }
        const std::size_t k1 = std::min(ks, slices.size() - 1 - std::size_t(dk));
        const std::size_t k2 = k1 + std::size_t(dk);
        const double u1 = value(slices[k1], b0, b1);
        const double u2 = value(slices[k2], b0 + d0, b1 + d1);
        const double dx = h * std::hypot(double(d0), double(d1));
        const double dt = std::abs(field.times[slices[k2]] - field.times[slices[k1]]);
        const double osc = std::abs(u2 - u1);
        const double ratio = osc / (std::pow(dx, spec.xExponent) + std::pow(dt, spec.tExponent));
        r.C = std::max(r.C, ratio);
        ++r.pairs;
        if (opt.Cref > 0.0 && ratio > opt.Cref) ++r.violations;
        if (type == 0 && osc > xMaxOsc[stratum]) {
            xMaxOsc[stratum] = osc;
            xMaxDist[stratum] = dx;
        }
        if (type == 1 && osc > tMaxOsc[stratum]) {
            tMaxOsc[stratum] = osc;
            tMaxDist[stratum] = dt;
        }
        if (j % scatterEvery == 0 && r.scatter.size() < opt.scatterRows) r.scatter.push_back({dx, dt, osc, ratio});
    }

    auto fit = [](const std::vector<double>& d, const std::vector<double>& o) {
        std::vector<double> x, y;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d[i] > 0.0 && o[i] > 0.0) {
                x.push_back(d[i]);
                y.push_back(o[i]);
            }
        return x.size() >= 2 ? loglog_fit(x, y).first : 0.0;
    };
    r.xFit = fit(xMaxDist, xMaxOsc);
    r.tFit = fit(tMaxDist, tMaxOsc);
    return r;
}

ModulusResult measure_modulus(const SolutionField& field, const HolderSpec& spec, const ModulusOptions& opt) {
    return measure_modulus(field.grid, field.tilt, spec, opt);
}

ModulusResult measure_modulus(const CorrectorField& field, const HolderSpec& spec, const ModulusOptions& opt) {
    return measure_modulus(field.v, Vec{0.0, 0.0}, spec, opt);
}

std::string ModulusResult::to_csv() const {
    std::ostringstream os;
    os.precision(10);
    os << "dx,dt,oscillation,ratio\n";
    for (const auto& p : scatter) os << p.dx << ',' << p.dt << ',' << p.oscillation << ',' << p.ratio << '\n';
    return os.str();
}

std::string ModulusResult::to_json(const HolderSpec& spec) const {
    nlohmann::ordered_json j;
    j["C"] = C;
    j["pairs"] = pairs;
    j["violations"] = violations;
    j["x_exponent"] = spec.xExponent;
    j["t_exponent"] = spec.tExponent;
    if (spec.exact) {
        j["x_exponent_exact"] = spec.xExponentExact.str();
        j["t_exponent_exact"] = spec.tExponentExact.str();
    }
    j["x_fit"] = xFit;
    j["t_fit"] = tFit;
    return j.dump(2);
}

}  // namespace hjh
