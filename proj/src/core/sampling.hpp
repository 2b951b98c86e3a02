#pragma once

#include <cstdint>

namespace hjh::detail {

/// Radical-inverse (Halton) sequence in a fixed prime base.
inline double radical_inverse(std::uint64_t index, unsigned base) {
    double inv = 1.0 / base, f = inv, result = 0.0;
    while (index > 0) {
        result += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return result;
}

inline constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

/// Coordinate d of the i-th Halton point, offset to skip the origin.
inline double halton(std::uint64_t i, unsigned d) { return radical_inverse(i + 17, kPrimes[d % 16]); }

/// FNV-1a, used for stable content digests.
inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 14695981039346656037ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace hjh::detail
