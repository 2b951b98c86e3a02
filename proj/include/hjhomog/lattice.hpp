#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hjhomog/types.hpp"

namespace hjh {

/// Uniform node lattice with spacing 1/ppu. Node `local` along an axis sits at
/// (origin + local)/ppu, so integer translations only change `origin`.
struct Lattice {
    int dim = 1;
    int ppu = 64;
    std::array<std::int64_t, kMaxDim> origin{0, 0};
    std::array<int, kMaxDim> n{1, 1};
    bool periodic = false;

    double h() const { return 1.0 / ppu; }
    std::size_t size() const { return std::size_t(n[0]) * std::size_t(n[1]); }
    double coord(int axis, std::int64_t local) const { return double(origin[axis] + local) / ppu; }
    Vec node(std::size_t idx) const;
    /// Domain length along an axis (periodic lattices only).
    double period(int axis) const { return double(n[axis]) / ppu; }

    /// Continuous local index of x along an axis.
    double local_index(int axis, double x) const { return x * ppu - double(origin[axis]); }
};

/// Box of nodes covering |x_a - center_a| <= radius on each axis; the center is
/// snapped to the nearest node and returned through `snapped`.
Lattice box_lattice(int dim, int ppu, const Vec& center, double radius, Vec* snapped = nullptr);

/// Periodic block [0, cells_a) on each axis.
Lattice periodic_lattice(int dim, int ppu, const std::array<int, kMaxDim>& cells);

/// Multilinear interpolation of lattice values at x; returns false when x is
/// outside a box lattice.
bool interpolate(const Lattice& lat, const double* values, const Vec& x, double& out);

/// Values of a scalar field on a lattice at a list of stored time slices.
struct GridField {
    Lattice lattice;
    std::vector<double> times;
    std::vector<std::vector<double>> slices;

    std::size_t slice_count() const { return slices.size(); }
    /// Index of the stored slice whose time is closest to t.
    std::size_t nearest_slice(double t) const;
    bool at(std::size_t slice, const Vec& x, double& out) const {
        return interpolate(lattice, slices.at(slice).data(), x, out);
    }
};

}  // namespace hjh
