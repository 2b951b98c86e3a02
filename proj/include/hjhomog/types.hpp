#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hjh {

inline constexpr int kMaxDim = 2;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Point, covector or velocity in at most two dimensions. Unused trailing
/// components are kept at zero so that norms and dot products ignore them.
using Vec = std::array<double, kMaxDim>;

inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }
inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec operator*(double s, const Vec& a) { return {s * a[0], s * a[1]}; }

enum class ErrorCode {
    InvalidArgument,
    Config,
    Domain,
    Numeric,
    Unsupported,
};

const char* error_code_name(ErrorCode code);

/// Every failure raised by the core carries one of the codes above so that the
/// C layer and the CLI can map it onto stable status values.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

/// Fractional part in [0,1), exact for integers.
inline double frac(double r) { return r - std::floor(r); }

/// Floor-based modulo that always lands in [0, m).
inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

bool all_finite(const Vec& v, int dim);

}  // namespace hjh
