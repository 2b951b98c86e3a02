#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hjhomog/cauchy.hpp"
#include "hjhomog/corrector.hpp"
#include "hjhomog/effective.hpp"
#include "hjhomog/fundamental.hpp"
#include "hjhomog/regularity.hpp"
#include "hjhomog/transport1d.hpp"

namespace hjh {

enum class ExperimentKind { Fundamental, Cauchy, Effective, Rate, Corrector, Transport, Holder, VerifyModel };

const char* experiment_name(ExperimentKind k);

struct FundamentalSettings {
    Vec base{0.0, 0.0};
    double c = 0.0;
    double T = 1.0;
    GridSpec grid;
    Scheme scheme = Scheme::Marching;
    double closedFormTol = -1.0;  // quadratic-free only; negative disables the check
};

struct CauchySettings {
    double epsilon = 0.25;
    double T = 1.0;
    InitialDatum phi;
    CauchyGrid cell;
    bool rescaled = true;
    bool composition = false;
    double gapFactor = 3.0;  // backend gap allowance in units of the combined resolution
};

struct EffectiveSettings {
    double vLo = -2.0, vHi = 2.0, vStep = 0.125;
    double pLo = -1.0, pHi = 1.0, pStep = 0.125;
    std::vector<double> epsilons{1.0 / 16, 1.0 / 32};
    GridSpec grid;
    double defectTol = 1e-6;
};

struct CorrectorSettings {
    Vec p{0.0, 0.0};
    double tauMax = 100.0;
    CellGrid cell;
    InitialDatum w0 = InitialDatum::constant(0.0);
    double probeTol = 0.05;
    double probeFrom = 1.0;
    double boundTol = 1e-2;
};

struct TransportSettings {
    VelocityField F = VelocityField::sinusoidal(2.0, 1.0);
    TransportDatum phi;
    double T = 1.0;
    std::vector<double> epsilons;
    double xLo = -2.0, xHi = 4.0;
    int samples = 2001;
    double slopeLo = 0.85, slopeHi = 1.15;
};

struct HolderSettings {
    std::vector<double> epsilons{1.0 / 8, 1.0 / 16, 1.0 / 32};
    double T = 2.0;
    InitialDatum phi = InitialDatum::well(2.0, 2.0, 8);
    CauchyGrid cell;
    ModulusOptions modulus;
    double stability = 0.1;
};

struct VerifySettings {
    int samples = 2000;
    double tol = 1e-9;
};

/// Fully validated experiment description. `canonical` is the normalized JSON
/// text; `hash` is its FNV-1a digest.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::VerifyModel;
    std::string modelName;
    ParamMap params;
    int dim = 1;
    std::string outputRoot = "runs";
    std::string outputName;
    std::uint64_t seed = 0;
    int workers = 0;  // 0 keeps the runtime default

    FundamentalSettings fundamental;
    CauchySettings cauchy;
    EffectiveSettings effective;
    RateOptions rate;
    CorrectorSettings corrector;
    TransportSettings transport;
    HolderSettings holder;
    VerifySettings verify;

    std::string canonical;
    std::uint64_t hash = 0;
};

/// Strict parse: unknown keys, wrong types and out-of-range values raise
/// Config errors whose message starts with the JSON path of the field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::uint64_t fnv1a(const std::string& bytes);

struct Assertion {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunOutcome {
    std::string outputDir;
    std::vector<Assertion> assertions;
    std::vector<std::string> files;
    std::string summary;  // JSON
    bool pass() const;
    std::string first_failure() const;
};

/// Output directory: $HJHOMOG_OUTPUT_ROOT (when set) or the configured root,
/// joined with the configured name or "<experiment>-<hash>".
std::string output_dir(const ExperimentConfig& cfg);

/// Runs the experiment, writing tables, summary.json, plot.gp and
/// manifest.json. The manifest is written with status "running" before any
/// compute and finalized afterwards (status "failed" when an error escapes).
RunOutcome run_experiment(const ExperimentConfig& cfg);

/// Schema and model checks only; no experiment compute.
RunOutcome verify_experiment(const ExperimentConfig& cfg);

}  // namespace hjh
