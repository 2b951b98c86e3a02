#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "hjhomog/types.hpp"

namespace hjh {

/// Exact fraction num/den with den > 0 and gcd(num, den) = 1.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
        require(den != 0, ErrorCode::InvalidArgument, "rational with zero denominator");
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double value() const { return double(num_) / double(den_); }
    std::string str() const { return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_); }

    /// Exact recovery of x as n/d with d <= maxDen; throws Unsupported when no
    /// such fraction matches x to 1e-12.
    static Rational from_double(double x, std::int64_t maxDen);

    friend Rational operator+(Rational a, Rational b) { return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_}; }
    friend Rational operator-(Rational a, Rational b) { return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_}; }
    friend Rational operator*(Rational a, Rational b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
    friend Rational operator/(Rational a, Rational b) {
        require(b.num_ != 0, ErrorCode::InvalidArgument, "rational division by zero");
        return {a.num_ * b.den_, a.den_ * b.num_};
    }
    friend bool operator==(Rational a, Rational b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator<(Rational a, Rational b) { return a.num_ * b.den_ < b.num_ * a.den_; }
    friend bool operator<=(Rational a, Rational b) { return !(b < a); }
    friend bool operator>(Rational a, Rational b) { return b < a; }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline Rational Rational::from_double(double x, std::int64_t maxDen) {
    require(std::isfinite(x), ErrorCode::InvalidArgument, "cannot convert a non-finite value to a rational");
    for (std::int64_t d = 1; d <= maxDen; ++d) {
        const double n = std::round(x * double(d));
        if (std::abs(n / double(d) - x) <= 1e-12 * std::max(1.0, std::abs(x))) return {std::int64_t(n), d};
    }
    fail(ErrorCode::Unsupported, "value " + std::to_string(x) + " is not a fraction with denominator <= " +
                                     std::to_string(maxDen) + "; approximate it by a nearby rational");
}

}  // namespace hjh
