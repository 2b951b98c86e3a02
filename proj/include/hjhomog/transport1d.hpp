#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hjh {

/// 1-periodic velocity field
///   F(r) = offset + sinAmp sin(2 pi k r) + cosAmp cos(2 pi k r) + pinAmp sin^2(pi k r).
struct VelocityField {
    double offset = 0.0;
    double sinAmp = 0.0;
    double cosAmp = 0.0;
    double pinAmp = 0.0;
    int freq = 1;

    static VelocityField constant(double c) { return {c, 0.0, 0.0, 0.0, 1}; }
    static VelocityField sinusoidal(double offset, double amp) { return {offset, amp, 0.0, 0.0, 1}; }
    /// amp sin^2(pi r): vanishes at every integer.
    static VelocityField pinned(double amp) { return {0.0, 0.0, 0.0, amp, 1}; }

    double operator()(double r) const;
    double lipschitz() const;
    double sup_abs() const;  // sampled on 4096 points, then padded by Lip/8192
    void validate() const;   // InvalidArgument on non-finite coefficients or freq < 1
    std::string str() const;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<double> y;
    double halvingGap = 0.0;  // |y(t) - y_{dt/2}(t)|
    double dt = 0.0;
};

/// RK4 for y' = F(y/eps) from y(0) = a, with the endpoint repeated at dt/2
/// as a self-check. Requires dt <= eps / (8 sup|F|). At most maxStored + 1
/// samples of the path are kept.
Trajectory integrate_char(const VelocityField& F, double eps, double a, double t, double dt,
                          int maxStored = 1024);

struct EffectiveSpeed {
    double xi = 0.0;
    bool pinned = false;
    std::vector<double> zeros;     // zeros of F in [0, 1)
    double harmonicIntegral = 0.0; // int_0^1 dr / |F(r)| (infinite when pinned)
    double odeXi = 0.0;            // (y(T) - a) / T at eps = 1e-3
    double odeGap = 0.0;
};

/// xi = sign(F) / int_0^1 dr/|F| by adaptive Simpson at tol 1e-10, or 0 when
/// F vanishes somewhere. Cross-checked against integrate_char at eps = 1e-3;
/// a disagreement above 1e-2 raises Numeric.
EffectiveSpeed effective_speed(const VelocityField& F);

/// Adaptive Simpson quadrature; Numeric error when the recursion depth limit
/// is reached before the tolerance is met.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int maxDepth = 50);

/// Lipschitz initial datum for the transport problem.
struct TransportDatum {
    enum class Kind { Tent, Sine, Affine };
    Kind kind = Kind::Tent;
    double amplitude = 1.0;
    double width = 1.0;  // tent half width
    double center = 0.0;
    double freq = 1.0;   // sine: amplitude sin(2 pi freq x)
    double slope = 0.0;  // affine: amplitude + slope x

    double operator()(double x) const;
    double lipschitz() const;
};

struct TransportProblem {
    VelocityField F;
    double epsilon = 0.01;
    TransportDatum phi;
    double T = 1.0;
};

/// u^eps(x, T) = phi(z(T)) with z' = -F(z/eps), z(0) = x, integrated at
/// dt = eps / (8 sup|F|) unless a smaller step is given.
double solve_transport(const TransportProblem& prob, double x, double dt = 0.0);

struct TransportRateReport {
    double xi = 0.0;
    std::vector<double> eps;
    std::vector<double> errors;  // sup_x |u^eps(x,T) - phi(x - xi T)|
    double slope = 0.0, intercept = 0.0;
    bool pass = false;           // slope inside [slopeLo, slopeHi]
    std::string to_csv() const;  // epsilon,sup_error
    std::string to_json() const;
};

/// Error sweep over eps on samples x in [xLo, xHi].
TransportRateReport transport_rate(const VelocityField& F, const TransportDatum& phi, double T,
                                   const std::vector<double>& epsList, double xLo, double xHi, int samples = 2001,
                                   double slopeLo = 0.85, double slopeHi = 1.15);

}  // namespace hjh
