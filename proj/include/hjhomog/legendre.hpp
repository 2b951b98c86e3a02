#pragma once

#include <vector>

#include "hjhomog/types.hpp"

namespace hjh {

/// Function samples on a tensor grid (one or two axes). Values are stored
/// row-major with the first axis fastest: index = i + n0 * j.
struct SampleGrid {
    int dim = 1;
    std::vector<double> axis[kMaxDim];
    std::vector<double> values;

    std::size_t n(int a) const { return a < dim ? axis[a].size() : 1; }
    std::size_t size() const { return n(0) * n(1); }
    Vec point(std::size_t idx) const;
    /// Multilinear interpolation; returns false outside the grid.
    bool interpolate(const Vec& x, double& out) const;
};

struct LegendreResult {
    std::vector<double> values;
    std::vector<Vec> argmax;
    std::vector<bool> unattained;  // maximizer sits on the sample boundary
    std::size_t flagged() const;
};

/// Discrete Legendre-Fenchel transform f*(p) = max_i (p.x_i - f_i), followed by
/// one parabolic refinement per axis around interior maximizers.
LegendreResult legendre_transform(const SampleGrid& samples, const std::vector<Vec>& slopes);

/// One-dimensional convenience overload.
LegendreResult legendre_transform(const std::vector<double>& x, const std::vector<double>& f,
                                  const std::vector<double>& slopes);

/// Uniform axis lo, lo+h, ..., hi (inclusive, h chosen to hit hi).
std::vector<double> uniform_axis(double lo, double hi, double h);

}  // namespace hjh
