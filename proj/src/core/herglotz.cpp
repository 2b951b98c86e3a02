#include "hjhomog/herglotz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hjhomog/fundamental.hpp"

namespace hjh {

Vec Curve::position(double s) const {
    if (s <= t.front()) return x.front();
    if (s >= t.back()) return x.back();
    auto it = std::upper_bound(t.begin(), t.end(), s);
    std::size_t k = std::size_t(it - t.begin()) - 1;
    double w = (s - t[k]) / (t[k + 1] - t[k]);
    return (1.0 - w) * x[k] + w * x[k + 1];
}

Vec Curve::segment_velocity(std::size_t seg) const {
    return (1.0 / (t[seg + 1] - t[seg])) * (x[seg + 1] - x[seg]);
}

double Curve::max_speed() const {
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) m = std::max(m, norm(segment_velocity(k)));
    return m;
}

void validate_curve(const Curve& c) {
    require(c.dim == 1 || c.dim == 2, ErrorCode::InvalidArgument, "curve dimension must be 1 or 2");
    require(c.t.size() >= 2 && c.t.size() == c.x.size(), ErrorCode::InvalidArgument,
            "curve needs at least two nodes with matching times and positions");
    require(c.t.front() == 0.0, ErrorCode::InvalidArgument, "curve must start at time 0");
    for (std::size_t k = 0; k < c.t.size(); ++k) {
        require(std::isfinite(c.t[k]) && all_finite(c.x[k], c.dim), ErrorCode::InvalidArgument,
                "curve node is not finite");
        if (k > 0)
            require(c.t[k] > c.t[k - 1], ErrorCode::InvalidArgument, "curve times must increase strictly");
    }
}

Curve straight_curve(int dim, const Vec& from, const Vec& to, double t) {
    Curve c;
    c.dim = dim;
    c.t = {0.0, t};
    c.x = {from, to};
    validate_curve(c);
    return c;
}

HerglotzPath integrate_xi(const LagrangianView& view, const Curve& curve, double c, double dt) {
    validate_curve(curve);
    require(dt > 0.0 && std::isfinite(dt), ErrorCode::InvalidArgument, "integrate_xi: dt must be positive");
    require(curve.dim == view.dim(), ErrorCode::InvalidArgument, "integrate_xi: dimension mismatch");
    HerglotzPath path;
    path.curve = curve;
    path.c0 = c;
    path.times.push_back(0.0);
    path.xi.push_back(c);
    double xi = c;
    double supL = 0.0;
    for (std::size_t seg = 0; seg + 1 < curve.t.size(); ++seg) {
        const double t0 = curve.t[seg], len = curve.t[seg + 1] - t0;
        const Vec v = curve.segment_velocity(seg);
        const int n = std::max(1, int(std::ceil(len / dt - 1e-12)));
        const double h = len / n;
        auto f = [&](double s, double val) {
            const Vec pos = curve.x[seg] + (s - t0) * v;
            double l = view.L(pos, val, v);
            if (!std::isfinite(l)) {
                std::ostringstream os;
                os << "non-finite Lagrangian along curve at t = " << s;
                fail(ErrorCode::Numeric, os.str());
            }
            supL = std::max(supL, std::abs(l));
            return l;
        };
        for (int k = 0; k < n; ++k) {
            const double s = t0 + k * h;
            const double k1 = f(s, xi);
            const double k2 = f(s + 0.5 * h, xi + 0.5 * h * k1);
            const double k3 = f(s + 0.5 * h, xi + 0.5 * h * k2);
            const double k4 = f(s + h, xi + h * k3);
            xi += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
            path.times.push_back(k + 1 == n ? curve.t[seg + 1] : s + h);
            path.xi.push_back(xi);
        }
    }
    path.supAbsL = supL;
    path.lipschitzBound = supL;
    path.certified = true;
    for (std::size_t k = 1; k < path.xi.size(); ++k) {
        const double dtk = path.times[k] - path.times[k - 1];
        if (std::abs(path.xi[k] - path.xi[k - 1]) > supL * dtk * (1.0 + 1e-9) + 1e-14) path.certified = false;
    }
    return path;
}

UpperBoundResult upper_bound_check(const FundamentalField& field, const HerglotzPath& path, double tol) {
    const Curve& cv = path.curve;
    const double d = norm(cv.x.front() - field.base);
    require(d <= 1e-9, ErrorCode::InvalidArgument, "curve does not start at the field's base point");
    require(std::abs(path.c0 - field.c) <= 1e-12, ErrorCode::InvalidArgument,
            "path initial value differs from the field's base value");
    UpperBoundResult r;
    r.m = field.value(cv.duration(), cv.x.back());
    r.xi = path.final_value();
    r.margin = r.m - r.xi;
    r.pass = r.margin <= tol;
    return r;
}

std::string curve_to_csv(const Curve& c) {
    std::ostringstream os;
    os.precision(17);
    os << "t";
    for (int d = 0; d < c.dim; ++d) os << ",x" << (d + 1);
    os << "\n";
    for (std::size_t k = 0; k < c.t.size(); ++k) {
        os << c.t[k];
        for (int d = 0; d < c.dim; ++d) os << "," << c.x[k][d];
        os << "\n";
    }
    return os.str();
}

Curve curve_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    require(bool(std::getline(is, line)), ErrorCode::InvalidArgument, "empty curve CSV");
    Curve c;
    c.dim = int(std::count(line.begin(), line.end(), ','));
    require(c.dim == 1 || c.dim == 2, ErrorCode::InvalidArgument, "curve CSV header must be t,x1[,x2]");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
        require(int(vals.size()) == c.dim + 1, ErrorCode::InvalidArgument, "curve CSV row has wrong width");
        c.t.push_back(vals[0]);
        c.x.push_back({vals[1], c.dim == 2 ? vals[2] : 0.0});
    }
    validate_curve(c);
    return c;
}

}  // namespace hjh
