#include "hjhomog/legendre.hpp"

#include <algorithm>
#include <limits>

namespace hjh {

Vec SampleGrid::point(std::size_t idx) const {
    const std::size_t n0 = n(0);
    Vec x{axis[0][idx % n0], 0.0};
    if (dim == 2) x[1] = axis[1][idx / n0];
    return x;
}

namespace {

// Locate x in a sorted axis; returns false outside [front, back].
bool bracket(const std::vector<double>& ax, double x, std::size_t& i, double& w) {
    if (ax.size() == 1) {
        i = 0;
        w = 0.0;
        return x == ax[0];
    }
    if (x < ax.front() || x > ax.back()) return false;
    auto it = std::upper_bound(ax.begin(), ax.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - ax.begin());
    if (hi >= ax.size()) hi = ax.size() - 1;
    i = hi - 1;
    w = (x - ax[i]) / (ax[hi] - ax[i]);
    return true;
}

double parabolic_gain(double gm, double g0, double gp) {
    double curv = gm - 2.0 * g0 + gp;
    if (!(curv < 0.0) || g0 < gm || g0 < gp) return 0.0;
    return -(gm - gp) * (gm - gp) / (8.0 * curv);
}

}  // namespace

bool SampleGrid::interpolate(const Vec& x, double& out) const {
    std::size_t i0, i1 = 0;
    double w0, w1 = 0.0;
    if (!bracket(axis[0], x[0], i0, w0)) return false;
    if (dim == 2 && !bracket(axis[1], x[1], i1, w1)) return false;
    const std::size_t n0 = n(0);
    auto at = [&](std::size_t a, std::size_t b) { return values[a + n0 * b]; };
    const std::size_t a1 = std::min(i0 + 1, n0 - 1);
    double lo = (1 - w0) * at(i0, i1) + w0 * at(a1, i1);
    if (dim == 1) {
        out = lo;
        return true;
    }
    const std::size_t b1 = std::min(i1 + 1, n(1) - 1);
    double hi = (1 - w0) * at(i0, b1) + w0 * at(a1, b1);
    out = (1 - w1) * lo + w1 * hi;
    return true;
}

std::size_t LegendreResult::flagged() const {
    std::size_t c = 0;
    for (bool b : unattained) c += b;
    return c;
}

LegendreResult legendre_transform(const SampleGrid& s, const std::vector<Vec>& slopes) {
    const std::size_t n0 = s.n(0), n1 = s.n(1), total = s.size();
    if (total == 0 || s.values.size() != total)
        fail(ErrorCode::InvalidArgument, "legendre_transform: empty or inconsistent sample grid");
    for (double v : s.values)
        if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "legendre_transform: non-finite sample");
    LegendreResult out;
    out.values.resize(slopes.size());
    out.argmax.resize(slopes.size());
    out.unattained.resize(slopes.size());
    for (std::size_t k = 0; k < slopes.size(); ++k) {
        const Vec& p = slopes[k];
        auto g = [&](std::size_t i, std::size_t j) {
            const std::size_t idx = i + n0 * j;
            return dot(p, s.point(idx)) - s.values[idx];
        };
        double best = -std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t j = 0; j < n1; ++j)
            for (std::size_t i = 0; i < n0; ++i) {
                double val = g(i, j);
                if (val > best) { best = val; bi = i; bj = j; }
            }
        bool edge = bi == 0 || bi + 1 == n0 || (s.dim == 2 && (bj == 0 || bj + 1 == n1));
        double gain = 0.0;
        if (bi > 0 && bi + 1 < n0) gain += parabolic_gain(g(bi - 1, bj), best, g(bi + 1, bj));
        if (s.dim == 2 && bj > 0 && bj + 1 < n1) gain += parabolic_gain(g(bi, bj - 1), best, g(bi, bj + 1));
        out.values[k] = best + gain;
        out.argmax[k] = s.point(bi + n0 * bj);
        out.unattained[k] = edge;
    }
    return out;
}

LegendreResult legendre_transform(const std::vector<double>& x, const std::vector<double>& f,
                                  const std::vector<double>& slopes) {
    SampleGrid s;
    s.dim = 1;
    s.axis[0] = x;
    s.values = f;
    std::vector<Vec> p;
    p.reserve(slopes.size());
    for (double v : slopes) p.push_back({v, 0.0});
    return legendre_transform(s, p);
}

std::vector<double> uniform_axis(double lo, double hi, double h) {
    if (!(hi >= lo) || !(h > 0.0)) fail(ErrorCode::InvalidArgument, "uniform_axis: bad range");
    const long n = std::lround((hi - lo) / h);
    std::vector<double> ax(static_cast<std::size_t>(n) + 1);
    for (long i = 0; i <= n; ++i) ax[i] = lo + (hi - lo) * double(i) / double(std::max(n, 1L));
    return ax;
}

}  // namespace hjh
