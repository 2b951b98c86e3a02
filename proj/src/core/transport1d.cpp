#include "hjhomog/transport1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "hjhomog/effective.hpp"
#include "hjhomog/types.hpp"

namespace hjh {

double VelocityField::operator()(double r) const {
    const double a = kTwoPi * freq * r;
    const double s = std::sin(0.5 * a);
    return offset + sinAmp * std::sin(a) + cosAmp * std::cos(a) + pinAmp * s * s;
}

double VelocityField::lipschitz() const {
    // d/dr sin^2(pi k r) = pi k sin(2 pi k r)
    return kTwoPi * freq * (std::hypot(sinAmp, cosAmp) + 0.25 * std::abs(pinAmp));
}

double VelocityField::sup_abs() const {
    double m = 0.0;
    for (int i = 0; i < 4096; ++i) m = std::max(m, std::abs((*this)(i / 4096.0)));
    return m + lipschitz() / 8192.0;
}

void VelocityField::validate() const {
    require(std::isfinite(offset) && std::isfinite(sinAmp) && std::isfinite(cosAmp) && std::isfinite(pinAmp),
            ErrorCode::InvalidArgument, "velocity field coefficients must be finite");
    require(freq >= 1, ErrorCode::InvalidArgument, "velocity field frequency must be a positive integer");
}

std::string VelocityField::str() const {
    std::ostringstream os;
    os << offset;
    if (sinAmp != 0.0) os << " + " << sinAmp << " sin(2pi " << freq << " r)";
    if (cosAmp != 0.0) os << " + " << cosAmp << " cos(2pi " << freq << " r)";
    if (pinAmp != 0.0) os << " + " << pinAmp << " sin^2(pi " << freq << " r)";
    return os.str();
}

namespace {

double rk4_step(const VelocityField& F, double eps, double y, double h) {
    const double k1 = F(y / eps);
    const double k2 = F((y + 0.5 * h * k1) / eps);
    const double k3 = F((y + 0.5 * h * k2) / eps);
    const double k4 = F((y + h * k3) / eps);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double march(const VelocityField& F, double eps, double y, double t, long steps,
             std::vector<double>* ts = nullptr, std::vector<double>* ys = nullptr, long every = 1) {
    const double h = t / double(steps);
    for (long k = 1; k <= steps; ++k) {
        y = rk4_step(F, eps, y, h);
        if (!std::isfinite(y)) {
            std::ostringstream os;
            os << "characteristic became non-finite at t = " << k * h;
            fail(ErrorCode::Numeric, os.str());
        }
        if (ts && (k % every == 0 || k == steps)) {
            ts->push_back(k * h);
            ys->push_back(y);
        }
    }
    return y;
}

long step_count(const VelocityField& F, double eps, double t, double dt) {
    require(eps > 0.0 && t >= 0.0 && std::isfinite(t), ErrorCode::InvalidArgument,
            "characteristics need eps > 0 and a finite horizon t >= 0");
    const double limit = eps / (8.0 * std::max(F.sup_abs(), 1e-300));
    if (dt <= 0.0) dt = limit;
    if (dt > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "time step " << dt << " does not resolve the fast scale; need dt <= eps/(8 sup|F|) = " << limit;
        fail(ErrorCode::InvalidArgument, os.str());
    }
    return std::max(1L, long(std::ceil(t / dt - 1e-9)));
}

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    if (depth <= 0) fail(ErrorCode::Numeric, "adaptive quadrature did not converge");
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

std::vector<double> find_zeros(const VelocityField& F) {
    constexpr int N = 4096;
    std::vector<double> z;
    std::vector<double> v(N + 1);
    for (int i = 0; i <= N; ++i) v[i] = F(double(i) / N);
    auto push = [&](double r) {
        r -= std::floor(r);
        for (double q : z)
            if (std::abs(q - r) < 1e-9 || std::abs(std::abs(q - r) - 1.0) < 1e-9) return;
        z.push_back(r);
    };
    for (int i = 0; i < N; ++i) {
        const double a = double(i) / N, b = double(i + 1) / N;
        if (v[i] == 0.0) {
            push(a);
            continue;
        }
        if ((v[i] < 0.0) != (v[i + 1] < 0.0) && v[i + 1] != 0.0) {
            double lo = a, hi = b, flo = v[i];
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi), fm = F(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            push(0.5 * (lo + hi));
        }
    }
    // Touching zeros do not change sign: refine every local minimum of |F|.
    for (int i = 0; i < N; ++i) {
        const double l = std::abs(v[(i + N - 1) % N]), c = std::abs(v[i]), r = std::abs(v[i + 1]);
        if (!(c <= l && c <= r)) continue;
        double lo = double(i - 1) / N, hi = double(i + 1) / N;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = std::abs(F(x1)), f2 = std::abs(F(x2));
        for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = std::abs(F(x1));
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = std::abs(F(x2));
            }
        }
        const double x = 0.5 * (lo + hi);
        if (std::abs(F(x)) <= 1e-10 * std::max(1.0, F.sup_abs())) push(x);
    }
    std::sort(z.begin(), z.end());
    return z;
}

}  // namespace

Trajectory integrate_char(const VelocityField& F, double eps, double a, double t, double dt, int maxStored) {
    F.validate();
    const long steps = step_count(F, eps, t, dt);
    Trajectory tr;
    tr.dt = t / double(steps);
    tr.t.push_back(0.0);
    tr.y.push_back(a);
    const long every = std::max(1L, steps / std::max(1, maxStored));
    const double y = march(F, eps, a, t, steps, &tr.t, &tr.y, every);
    tr.halvingGap = std::abs(y - march(F, eps, a, t, 2 * steps));
    return tr;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int maxDepth) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, maxDepth);
}

EffectiveSpeed effective_speed(const VelocityField& F) {
    F.validate();
    EffectiveSpeed s;
    s.zeros = find_zeros(F);
    s.pinned = !s.zeros.empty();
    if (s.pinned) {
        s.xi = 0.0;
        s.harmonicIntegral = std::numeric_limits<double>::infinity();
    } else {
        s.harmonicIntegral = adaptive_simpson([&](double r) { return 1.0 / std::abs(F(r)); }, 0.0, 1.0, 1e-10);
        s.xi = (F(0.0) > 0.0 ? 1.0 : -1.0) / s.harmonicIntegral;
    }

    constexpr double eps = 1e-3;
    const double T = 10.0;
    const double a = s.pinned ? eps * (s.zeros.front() + 0.3) : 0.0;
    const Trajectory tr = integrate_char(F, eps, a, T, 0.0, 16);
    s.odeXi = (tr.y.back() - a) / T;
    s.odeGap = std::abs(s.odeXi - s.xi);
    if (s.odeGap > 1e-2) {
        std::ostringstream os;
        os << "effective speed " << s.xi << " disagrees with the characteristic average " << s.odeXi;
        fail(ErrorCode::Numeric, os.str());
    }
    return s;
}

double TransportDatum::operator()(double x) const {
    switch (kind) {
        case Kind::Tent: return amplitude * std::max(0.0, 1.0 - std::abs(x - center) / width);
        case Kind::Sine: return amplitude * std::sin(kTwoPi * freq * x);
        case Kind::Affine: return amplitude + slope * x;
    }
    return 0.0;
}

double TransportDatum::lipschitz() const {
    switch (kind) {
        case Kind::Tent: return std::abs(amplitude) / width;
        case Kind::Sine: return std::abs(amplitude) * kTwoPi * freq;
        case Kind::Affine: return std::abs(slope);
    }
    return 0.0;
}

double solve_transport(const TransportProblem& prob, double x, double dt) {
    prob.F.validate();
    require(prob.phi.kind != TransportDatum::Kind::Tent || prob.phi.width > 0.0, ErrorCode::InvalidArgument,
            "tent datum needs a positive width");
    VelocityField back = prob.F;
    back.offset = -back.offset;
    back.sinAmp = -back.sinAmp;
    back.cosAmp = -back.cosAmp;
    back.pinAmp = -back.pinAmp;
    const long steps = step_count(back, prob.epsilon, prob.T, dt);
    return prob.phi(march(back, prob.epsilon, x, prob.T, steps));
}

TransportRateReport transport_rate(const VelocityField& F, const TransportDatum& phi, double T,
                                   const std::vector<double>& epsList, double xLo, double xHi, int samples,
                                   double slopeLo, double slopeHi) {
    require(samples >= 2 && xHi > xLo, ErrorCode::InvalidArgument, "transport sweep needs a sample window");
    require(epsList.size() >= 2, ErrorCode::InvalidArgument, "transport sweep needs at least two epsilons");
    TransportRateReport r;
    r.xi = effective_speed(F).xi;
    r.eps = epsList;
    for (double eps : epsList) {
        TransportProblem prob{F, eps, phi, T};
        double e = 0.0;
#pragma omp parallel for reduction(max : e) schedule(static)
        for (int i = 0; i < samples; ++i) {
            const double x = xLo + (xHi - xLo) * i / (samples - 1);
            e = std::max(e, std::abs(solve_transport(prob, x) - phi(x - r.xi * T)));
        }
        r.errors.push_back(e);
    }
    std::tie(r.slope, r.intercept) = loglog_fit(r.eps, r.errors);
    r.pass = r.slope >= slopeLo && r.slope <= slopeHi;
    return r;
}

std::string TransportRateReport::to_csv() const {
    std::ostringstream os;
    os.precision(10);
    os << "epsilon,sup_error\n";
    for (std::size_t i = 0; i < eps.size(); ++i) os << eps[i] << ',' << errors[i] << '\n';
    return os.str();
}

std::string TransportRateReport::to_json() const {
    nlohmann::ordered_json j;
    j["status"] = pass ? "PASS" : "FAIL";
    j["xi"] = xi;
    j["slope"] = slope;
    j["intercept"] = intercept;
    j["epsilon"] = eps;
    j["sup_error"] = errors;
    return j.dump(2);
}

}  // namespace hjh
