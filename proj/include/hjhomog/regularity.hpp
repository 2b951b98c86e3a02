#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hjhomog/cauchy.hpp"
#include "hjhomog/corrector.hpp"
#include "hjhomog/rational.hpp"

namespace hjh {

/// Growth exponents m1 = q2/(q2-1), m2 = q1/(q1-1) and the Hoelder exponents
/// m1/(m1+m2-1) in space and m1/(m1+m2) in time.
struct HolderSpec {
    bool exact = false;  // rational fields are valid
    Rational m1, m2, xExponentExact, tExponentExact;
    double q1 = 2.0, q2 = 2.0;
    double m1d = 2.0, m2d = 2.0;
    double xExponent = 0.0, tExponent = 0.0;

    std::string str() const;
};

/// Config error when q1 <= 1 or q1 > q2. Rational arithmetic is used whenever
/// both exponents are fractions with denominator <= 1000.
HolderSpec holder_spec(double q1, double q2);
HolderSpec holder_spec(const HamiltonianModel& model);

struct ModulusOptions {
    double tMin = 1.0;
    double tMax = std::numeric_limits<double>::infinity();
    std::size_t pairs = 100000;
    int decades = 3;          // distance strata per axis, counted down from the largest offset
    double Cref = 0.0;        // when positive, pairs above Cref count as violations
    std::uint64_t seed = 0;   // offset into the quasi-random sequence
    std::size_t scatterRows = 4000;
};

struct ModulusPair {
    double dx = 0.0, dt = 0.0, oscillation = 0.0, ratio = 0.0;
};

struct ModulusResult {
    double C = 0.0;
    std::size_t pairs = 0;
    std::size_t violations = 0;
    double xFit = 0.0, tFit = 0.0;  // slopes of per-stratum maxima on log-log axes
    std::vector<ModulusPair> scatter;

    std::string to_csv() const;  // dx,dt,oscillation,ratio
    std::string to_json(const HolderSpec& spec) const;
};

/// Smallest C with |u(x,t) - u(y,s)| <= C (|x-y|^a + |t-s|^b) over Halton
/// pairs of lattice nodes and stored slices with t, s in [tMin, tMax]. The
/// pairs split evenly into space-only, time-only and mixed offsets, each
/// stratified by distance decade. Values are slice + tilt.x.
ModulusResult measure_modulus(const GridField& field, const Vec& tilt, const HolderSpec& spec,
                              const ModulusOptions& opt = {});
ModulusResult measure_modulus(const SolutionField& field, const HolderSpec& spec, const ModulusOptions& opt = {});
ModulusResult measure_modulus(const CorrectorField& field, const HolderSpec& spec, const ModulusOptions& opt = {});

/// Component `dim` of the base-b radical inverse sequence at index i.
double halton(std::uint64_t i, int dim);

}  // namespace hjh
