#include "hjhomog/lattice.hpp"

#include <cmath>

namespace hjh {

Vec Lattice::node(std::size_t idx) const {
    const std::int64_t i = std::int64_t(idx % std::size_t(n[0]));
    const std::int64_t j = std::int64_t(idx / std::size_t(n[0]));
    return {coord(0, i), dim == 2 ? coord(1, j) : 0.0};
}

Lattice box_lattice(int dim, int ppu, const Vec& center, double radius, Vec* snapped) {
    require(dim == 1 || dim == 2, ErrorCode::InvalidArgument, "lattice dimension must be 1 or 2");
    require(ppu > 0 && radius >= 0.0, ErrorCode::InvalidArgument, "bad lattice size");
    Lattice lat;
    lat.dim = dim;
    lat.ppu = ppu;
    const std::int64_t half = std::int64_t(std::ceil(radius * ppu - 1e-9));
    Vec c{0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
        const std::int64_t ci = std::llround(center[a] * ppu);
        c[a] = double(ci) / ppu;
        lat.origin[a] = ci - half;
        lat.n[a] = int(2 * half + 1);
    }
    if (snapped) *snapped = c;
    return lat;
}

Lattice periodic_lattice(int dim, int ppu, const std::array<int, kMaxDim>& cells) {
    require(dim == 1 || dim == 2, ErrorCode::InvalidArgument, "lattice dimension must be 1 or 2");
    Lattice lat;
    lat.dim = dim;
    lat.ppu = ppu;
    lat.periodic = true;
    for (int a = 0; a < dim; ++a) {
        require(cells[a] > 0, ErrorCode::InvalidArgument, "periodic lattice needs positive cell count");
        lat.n[a] = cells[a] * ppu;
    }
    return lat;
}

bool interpolate(const Lattice& lat, const double* values, const Vec& x, double& out) {
    std::int64_t i0[kMaxDim] = {0, 0}, i1[kMaxDim] = {0, 0};
    double w[kMaxDim] = {0.0, 0.0};
    for (int a = 0; a < lat.dim; ++a) {
        const double s = lat.local_index(a, x[a]);
        const double f = std::floor(s);
        std::int64_t k = std::int64_t(f);
        w[a] = s - f;
        if (lat.periodic) {
            i0[a] = floor_mod(k, lat.n[a]);
            i1[a] = floor_mod(k + 1, lat.n[a]);
        } else {
            if (k < 0 || k > lat.n[a] - 1) return false;
            if (k == lat.n[a] - 1) {
                if (w[a] > 1e-12) return false;
                w[a] = 0.0;
                i0[a] = i1[a] = k;
            } else {
                i0[a] = k;
                i1[a] = k + 1;
            }
        }
    }
    const std::size_t n0 = std::size_t(lat.n[0]);
    auto at = [&](std::int64_t a, std::int64_t b) { return values[std::size_t(a) + n0 * std::size_t(b)]; };
    double lo = (1 - w[0]) * at(i0[0], i0[1]) + w[0] * at(i1[0], i0[1]);
    if (lat.dim == 1) {
        out = lo;
        return true;
    }
    double hi = (1 - w[0]) * at(i0[0], i1[1]) + w[0] * at(i1[0], i1[1]);
    out = (1 - w[1]) * lo + w[1] * hi;
    return true;
}

std::size_t GridField::nearest_slice(double t) const {
    require(!times.empty(), ErrorCode::Domain, "field has no stored slices");
    std::size_t best = 0;
    for (std::size_t k = 1; k < times.size(); ++k)
        if (std::abs(times[k] - t) < std::abs(times[best] - t)) best = k;
    return best;
}

}  // namespace hjh
