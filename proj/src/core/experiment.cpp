#include "hjhomog/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#ifdef HJHOMOG_HAVE_OPENMP
#include <omp.h>
#endif

#include "hjhomog/herglotz.hpp"
#include "hjhomog/legendre.hpp"

namespace hjh {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

const char* experiment_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Fundamental: return "fundamental";
        case ExperimentKind::Cauchy: return "cauchy";
        case ExperimentKind::Effective: return "effective";
        case ExperimentKind::Rate: return "rate";
        case ExperimentKind::Corrector: return "corrector";
        case ExperimentKind::Transport: return "transport";
        case ExperimentKind::Holder: return "holder";
        case ExperimentKind::VerifyModel: return "verify-model";
    }
    return "unknown";
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
    fail(ErrorCode::Config, path + ": " + msg);
}

/// Strict view of one JSON object: every key must be consumed before finish().
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) schema_error(path_.empty() ? "config" : path_, "expected an object");
    }
    Section(const Section&) = delete;
    Section& operator=(const Section&) = delete;

    ~Section() noexcept(false) {
        if (!std::uncaught_exceptions()) finish();
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key, double def, double lo, double hi, bool openLo = false) {
        if (!has(key)) return def;
        const json& v = raw(key);
        if (!v.is_number()) schema_error(at(key), "expected a number");
        const double x = v.get<double>();
        check_range(key, x, lo, hi, openLo);
        return x;
    }

    double required_number(const std::string& key, double lo, double hi, bool openLo = false) {
        if (!has(key)) schema_error(at(key), "required field is missing");
        return number(key, 0.0, lo, hi, openLo);
    }

    long long integer(const std::string& key, long long def, long long lo, long long hi) {
        if (!has(key)) return def;
        const json& v = raw(key);
        if (!v.is_number_integer()) schema_error(at(key), "expected an integer");
        const long long x = v.get<long long>();
        if (x < lo || x > hi) schema_error(at(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return x;
    }

    bool boolean(const std::string& key, bool def) {
        if (!has(key)) return def;
        const json& v = raw(key);
        if (!v.is_boolean()) schema_error(at(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, const std::string& def) {
        if (!has(key)) return def;
        const json& v = raw(key);
        if (!v.is_string()) schema_error(at(key), "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key, const std::vector<double>& def, double lo, double hi,
                                bool openLo = false) {
        if (!has(key)) return def;
        const json& v = raw(key);
        if (!v.is_array()) schema_error(at(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string p = at(key) + "[" + std::to_string(i) + "]";
            if (!v[i].is_number()) schema_error(p, "expected a number");
            const double x = v[i].get<double>();
            if (!std::isfinite(x) || x < lo || x > hi || (openLo && x <= lo))
                schema_error(p, "out of range");
            out.push_back(x);
        }
        return out;
    }

    Vec vec(const std::string& key, const Vec& def, int dim, double lo = -1e6, double hi = 1e6) {
        if (!has(key)) return def;
        const std::vector<double> xs = numbers(key, {}, lo, hi);
        if (int(xs.size()) != dim)
            schema_error(at(key), "expected " + std::to_string(dim) + " component(s) to match the model dimension");
        Vec out{0.0, 0.0};
        for (int d = 0; d < dim; ++d) out[d] = xs[d];
        return out;
    }

    void finish() {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) schema_error(at(it.key()), "unknown key");
    }

    const std::string& path() const { return path_; }

private:
    void check_range(const std::string& key, double x, double lo, double hi, bool openLo) const {
        if (!std::isfinite(x)) schema_error(at(key), "must be finite");
        if (x < lo || x > hi || (openLo && x <= lo)) {
            std::ostringstream os;
            os << "must lie in " << (openLo ? "(" : "[") << lo << ", " << hi << "]";
            schema_error(at(key), os.str());
        }
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

GridSpec read_grid(const json& j, const std::string& path) {
    Section s(j, path);
    GridSpec g;
    g.ppu = int(s.integer("ppu", g.ppu, 2, 4096));
    g.dt = s.number("dt", g.dt, 0.0, 1.0, true);
    g.substeps = int(s.integer("substeps", g.substeps, 1, 256));
    g.vmax = s.number("vmax", g.vmax, 0.0, 1e3);
    g.radius = s.number("radius", g.radius, 0.0, 64.0, true);
    g.pad = s.number("pad", g.pad, -1.0, 64.0);
    g.storeEvery = int(s.integer("store_every", g.storeEvery, 1, 1 << 20));
    return g;
}

CauchyGrid read_cauchy_grid(const json& j, const std::string& path) {
    Section s(j, path);
    CauchyGrid g;
    g.ppc = int(s.integer("ppc", g.ppc, 2, 4096));
    g.dtau = s.number("dtau", g.dtau, 0.0, 1.0, true);
    g.substeps = int(s.integer("substeps", g.substeps, 1, 256));
    g.vmax = s.number("vmax", g.vmax, 0.0, 1e3);
    g.outputDt = s.number("output_dt", g.outputDt, 0.0, 1e3, true);
    return g;
}

CellGrid read_cell_grid(const json& j, const std::string& path) {
    Section s(j, path);
    CellGrid g;
    g.ppc = int(s.integer("ppc", g.ppc, 2, 4096));
    g.dtau = s.number("dtau", g.dtau, 0.0, 1.0, true);
    g.substeps = int(s.integer("substeps", g.substeps, 1, 256));
    g.vmax = s.number("vmax", g.vmax, 0.0, 1e3);
    g.storeDtau = s.number("store_dtau", g.storeDtau, 0.0, 1e6, true);
    return g;
}

PhiKind phi_kind(const std::string& name, const std::string& path) {
    if (name == "constant") return PhiKind::Constant;
    if (name == "sinusoid") return PhiKind::Sinusoid;
    if (name == "bump") return PhiKind::Bump;
    if (name == "well") return PhiKind::Well;
    schema_error(path, "unknown component kind '" + name + "' (constant, sinusoid, bump, well)");
}

InitialDatum read_datum(const json& j, const std::string& path, int dim) {
    Section s(j, path);
    InitialDatum d;
    d.tilt = s.vec("tilt", d.tilt, dim);
    d.offset = s.number("offset", 0.0, -1e6, 1e6);
    d.period = int(s.integer("period", 1, 1, 64));
    if (s.has("parts")) {
        const json& parts = s.raw("parts");
        if (!parts.is_array()) schema_error(s.at("parts"), "expected an array of components");
        for (std::size_t i = 0; i < parts.size(); ++i) {
            Section c(parts[i], s.at("parts") + "[" + std::to_string(i) + "]");
            if (!c.has("kind")) schema_error(c.at("kind"), "required field is missing");
            PhiComponent pc;
            pc.kind = phi_kind(c.string("kind", ""), c.at("kind"));
            pc.amplitude = c.number("amplitude", 0.0, -1e6, 1e6);
            pc.frequency = int(c.integer("frequency", 1, 1, 256));
            pc.phase = c.number("phase", 0.0, -1e6, 1e6);
            pc.width = c.number("width", 1.0, 0.0, 64.0, true);
            pc.center = c.vec("center", pc.center, dim);
            d.parts.push_back(pc);
        }
    }
    return d;
}

VelocityField read_velocity(const json& j, const std::string& path) {
    Section s(j, path);
    VelocityField F;
    F.offset = s.number("offset", 0.0, -1e3, 1e3);
    F.sinAmp = s.number("sin", 0.0, -1e3, 1e3);
    F.cosAmp = s.number("cos", 0.0, -1e3, 1e3);
    F.pinAmp = s.number("pin", 0.0, -1e3, 1e3);
    F.freq = int(s.integer("frequency", 1, 1, 256));
    return F;
}

TransportDatum read_transport_datum(const json& j, const std::string& path) {
    Section s(j, path);
    TransportDatum d;
    const std::string kind = s.string("kind", "tent");
    if (kind == "tent")
        d.kind = TransportDatum::Kind::Tent;
    else if (kind == "sine")
        d.kind = TransportDatum::Kind::Sine;
    else if (kind == "affine")
        d.kind = TransportDatum::Kind::Affine;
    else
        schema_error(s.at("kind"), "unknown datum kind '" + kind + "' (tent, sine, affine)");
    d.amplitude = s.number("amplitude", d.amplitude, -1e6, 1e6);
    d.width = s.number("width", d.width, 0.0, 1e6, true);
    d.center = s.number("center", d.center, -1e6, 1e6);
    d.freq = s.number("frequency", d.freq, 0.0, 1e3, true);
    d.slope = s.number("slope", d.slope, -1e6, 1e6);
    return d;
}

ExperimentKind parse_kind(const std::string& name) {
    for (auto k : {ExperimentKind::Fundamental, ExperimentKind::Cauchy, ExperimentKind::Effective, ExperimentKind::Rate,
                   ExperimentKind::Corrector, ExperimentKind::Transport, ExperimentKind::Holder,
                   ExperimentKind::VerifyModel})
        if (name == experiment_name(k)) return k;
    schema_error("experiment", "unknown experiment kind '" + name +
                                   "' (fundamental, cauchy, effective, rate, corrector, transport, holder, verify-model)");
}

void read_fundamental(const json& j, ExperimentConfig& cfg) {
    Section s(j, "fundamental");
    auto& f = cfg.fundamental;
    f.base = s.vec("base", f.base, cfg.dim);
    f.c = s.number("c", f.c, -1e6, 1e6);
    f.T = s.number("T", f.T, 0.0, 64.0, true);
    if (s.has("grid")) f.grid = read_grid(s.raw("grid"), s.at("grid"));
    const std::string scheme = s.string("scheme", "marching");
    if (scheme == "marching")
        f.scheme = Scheme::Marching;
    else if (scheme == "picard")
        f.scheme = Scheme::Picard;
    else
        schema_error(s.at("scheme"), "expected 'marching' or 'picard'");
    f.closedFormTol = s.number("closed_form_tol", f.closedFormTol, -1.0, 1e3);
}

void read_cauchy(const json& j, ExperimentConfig& cfg) {
    Section s(j, "cauchy");
    auto& c = cfg.cauchy;
    c.epsilon = s.number("epsilon", c.epsilon, 0.0, 1.0, true);
    c.T = s.number("T", c.T, 0.0, 64.0, true);
    if (s.has("phi")) c.phi = read_datum(s.raw("phi"), s.at("phi"), cfg.dim);
    if (s.has("grid")) c.cell = read_cauchy_grid(s.raw("grid"), s.at("grid"));
    const std::string backends = s.string("backends", "rescaled");
    if (backends == "rescaled") {
        c.rescaled = true;
        c.composition = false;
    } else if (backends == "composition") {
        c.rescaled = false;
        c.composition = true;
    } else if (backends == "both") {
        c.rescaled = c.composition = true;
    } else {
        schema_error(s.at("backends"), "expected 'rescaled', 'composition' or 'both'");
    }
    c.gapFactor = s.number("gap_factor", c.gapFactor, 0.0, 1e3, true);
}

void read_effective(const json& j, ExperimentConfig& cfg) {
    Section s(j, "effective");
    auto& e = cfg.effective;
    if (s.has("v_axis")) {
        Section a(s.raw("v_axis"), s.at("v_axis"));
        e.vLo = a.required_number("lo", -64.0, 64.0);
        e.vHi = a.required_number("hi", -64.0, 64.0);
        e.vStep = a.required_number("step", 0.0, 64.0, true);
        if (e.vHi <= e.vLo) schema_error(a.at("hi"), "must exceed lo");
    }
    if (s.has("p_axis")) {
        Section a(s.raw("p_axis"), s.at("p_axis"));
        e.pLo = a.required_number("lo", -64.0, 64.0);
        e.pHi = a.required_number("hi", -64.0, 64.0);
        e.pStep = a.required_number("step", 0.0, 64.0, true);
        if (e.pHi <= e.pLo) schema_error(a.at("hi"), "must exceed lo");
    }
    e.epsilons = s.numbers("epsilons", e.epsilons, 0.0, 1.0, true);
    if (e.epsilons.size() < 2) schema_error(s.at("epsilons"), "needs at least two values");
    if (s.has("grid")) e.grid = read_grid(s.raw("grid"), s.at("grid"));
    e.defectTol = s.number("defect_tol", e.defectTol, 0.0, 1e3);
}

void read_rate(const json& j, ExperimentConfig& cfg) {
    Section s(j, "rate");
    auto& r = cfg.rate;
    if (s.has("phi"))
        r.phi = read_datum(s.raw("phi"), s.at("phi"), cfg.dim);
    else
        r.phi = InitialDatum::sinusoid(0.5);
    r.T = s.number("T", r.T, 0.0, 64.0, true);
    r.tMin = s.number("t_min", r.tMin, 0.0, 64.0, true);
    if (r.tMin > r.T) schema_error(s.at("t_min"), "must not exceed T");
    r.epsList = s.numbers("epsilons", r.epsList, 0.0, 1.0, true);
    if (r.epsList.size() < 2) schema_error(s.at("epsilons"), "needs at least two values");
    if (s.has("grid")) r.grid = read_cauchy_grid(s.raw("grid"), s.at("grid"));
    r.monitorPerUnit = int(s.integer("monitor_per_unit", r.monitorPerUnit, 8, 1 << 16));
    r.monitorDt = s.number("monitor_dt", r.monitorDt, 0.0, 64.0, true);
    r.tableVmax = s.number("table_vmax", r.tableVmax, 0.0, 64.0, true);
    r.tableDv = s.number("table_dv", r.tableDv, 0.0, 64.0, true);
    r.tableTau = s.number("table_tau", r.tableTau, 0.0, 1e5, true);
    r.control = s.boolean("control", r.control);
    r.controlThreshold = s.number("control_threshold", r.controlThreshold, 0.0, 10.0, true);
    r.slopeLo = s.number("slope_lo", r.slopeLo, -10.0, 10.0);
    r.slopeHi = s.number("slope_hi", r.slopeHi, -10.0, 10.0);
    if (r.slopeHi <= r.slopeLo) schema_error(s.at("slope_hi"), "must exceed slope_lo");
}

void read_corrector(const json& j, ExperimentConfig& cfg) {
    Section s(j, "corrector");
    auto& c = cfg.corrector;
    c.p = s.vec("p", c.p, cfg.dim);
    c.tauMax = s.number("tau_max", c.tauMax, 0.0, 1e5, true);
    if (s.has("grid")) c.cell = read_cell_grid(s.raw("grid"), s.at("grid"));
    if (s.has("w0")) c.w0 = read_datum(s.raw("w0"), s.at("w0"), cfg.dim);
    if (norm(c.w0.tilt) != 0.0) schema_error(s.at("w0.tilt"), "the cell datum must be periodic");
    c.probeTol = s.number("probe_tol", c.probeTol, 0.0, 1e3);
    c.probeFrom = s.number("probe_from", c.probeFrom, 0.0, 1e5);
    c.boundTol = s.number("bound_tol", c.boundTol, 0.0, 1e3, true);
}

void read_transport(const json& j, ExperimentConfig& cfg) {
    Section s(j, "transport");
    auto& t = cfg.transport;
    if (s.has("field")) t.F = read_velocity(s.raw("field"), s.at("field"));
    if (s.has("phi")) t.phi = read_transport_datum(s.raw("phi"), s.at("phi"));
    t.T = s.number("T", t.T, 0.0, 1e4, true);
    t.epsilons = s.numbers("epsilons", t.epsilons, 0.0, 1.0, true);
    if (t.epsilons.size() == 1) schema_error(s.at("epsilons"), "needs zero or at least two values");
    t.xLo = s.number("x_lo", t.xLo, -1e4, 1e4);
    t.xHi = s.number("x_hi", t.xHi, -1e4, 1e4);
    if (t.xHi <= t.xLo) schema_error(s.at("x_hi"), "must exceed x_lo");
    t.samples = int(s.integer("samples", t.samples, 2, 1 << 20));
    t.slopeLo = s.number("slope_lo", t.slopeLo, -10.0, 10.0);
    t.slopeHi = s.number("slope_hi", t.slopeHi, -10.0, 10.0);
    if (t.slopeHi <= t.slopeLo) schema_error(s.at("slope_hi"), "must exceed slope_lo");
}

void read_holder(const json& j, ExperimentConfig& cfg) {
    Section s(j, "holder");
    auto& h = cfg.holder;
    h.epsilons = s.numbers("epsilons", h.epsilons, 0.0, 1.0, true);
    if (h.epsilons.empty()) schema_error(s.at("epsilons"), "needs at least one value");
    h.T = s.number("T", h.T, 0.0, 64.0, true);
    if (s.has("phi")) h.phi = read_datum(s.raw("phi"), s.at("phi"), cfg.dim);
    if (s.has("grid")) h.cell = read_cauchy_grid(s.raw("grid"), s.at("grid"));
    else {
        h.cell.ppc = 32;
        h.cell.dtau = 1.0 / 32;
    }
    h.modulus.tMin = s.number("t_min", h.modulus.tMin, 0.0, 64.0);
    if (h.modulus.tMin >= h.T) schema_error(s.at("t_min"), "must be smaller than T");
    h.modulus.pairs = std::size_t(s.integer("pairs", (long long)h.modulus.pairs, 3, 100000000));
    h.modulus.decades = int(s.integer("decades", h.modulus.decades, 1, 12));
    h.modulus.scatterRows = std::size_t(s.integer("scatter_rows", (long long)h.modulus.scatterRows, 0, 10000000));
    h.stability = s.number("stability", h.stability, 0.0, 10.0, true);
}

void read_verify(const json& j, ExperimentConfig& cfg) {
    Section s(j, "verify-model");
    cfg.verify.samples = int(s.integer("samples", cfg.verify.samples, 10, 10000000));
    cfg.verify.tol = s.number("tol", cfg.verify.tol, 0.0, 1.0, true);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::Config, std::string("config: not valid JSON (") + e.what() + ")");
    }
    ExperimentConfig cfg;
    {
        Section s(root, "");
        if (!s.has("experiment")) schema_error("experiment", "required field is missing");
        cfg.kind = parse_kind(s.string("experiment", ""));

        if (s.has("model")) {
            Section m(s.raw("model"), "model");
            if (!m.has("name")) schema_error("model.name", "required field is missing");
            cfg.modelName = m.string("name", "");
            cfg.dim = int(m.integer("dim", 1, 1, kMaxDim));
            if (m.has("params")) {
                const json& p = m.raw("params");
                if (!p.is_object()) schema_error("model.params", "expected an object of numbers");
                for (auto it = p.begin(); it != p.end(); ++it) {
                    if (!it.value().is_number() || !std::isfinite(it.value().get<double>()))
                        schema_error("model.params." + it.key(), "expected a finite number");
                    cfg.params[it.key()] = it.value().get<double>();
                }
            }
        } else if (cfg.kind != ExperimentKind::Transport) {
            schema_error("model", "required field is missing");
        }

        if (s.has("output")) {
            Section o(s.raw("output"), "output");
            cfg.outputRoot = o.string("root", cfg.outputRoot);
            cfg.outputName = o.string("name", "");
            if (cfg.outputName.find('/') != std::string::npos || cfg.outputName == "." || cfg.outputName == "..")
                schema_error("output.name", "must be a plain directory name");
        }
        cfg.seed = std::uint64_t(s.integer("seed", 0, 0, std::numeric_limits<long long>::max()));
        cfg.workers = int(s.integer("workers", 0, 0, 1024));

        const std::string section = experiment_name(cfg.kind);
        for (const char* other : {"fundamental", "cauchy", "effective", "rate", "corrector", "transport", "holder",
                                  "verify-model"})
            if (section != other && s.has(other))
                schema_error(other, "section does not apply to a '" + section + "' experiment");
        const json empty = json::object();
        const json& body = s.has(section) ? s.raw(section) : empty;
        switch (cfg.kind) {
            case ExperimentKind::Fundamental: read_fundamental(body, cfg); break;
            case ExperimentKind::Cauchy: read_cauchy(body, cfg); break;
            case ExperimentKind::Effective: read_effective(body, cfg); break;
            case ExperimentKind::Rate: read_rate(body, cfg); break;
            case ExperimentKind::Corrector: read_corrector(body, cfg); break;
            case ExperimentKind::Transport: read_transport(body, cfg); break;
            case ExperimentKind::Holder: read_holder(body, cfg); break;
            case ExperimentKind::VerifyModel: read_verify(body, cfg); break;
        }
    }
    if (!cfg.modelName.empty()) {
        try {
            make_model(cfg.modelName, cfg.params, cfg.dim);
        } catch (const Error& e) {
            fail(ErrorCode::Config, std::string("model: ") + e.what());
        }
    }
    cfg.canonical = root.dump();
    cfg.hash = fnv1a(cfg.canonical);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Config, path + ": cannot open config file");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

bool RunOutcome::pass() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

std::string RunOutcome::first_failure() const {
    for (const auto& a : assertions)
        if (!a.pass) return a.name + ": " + a.detail;
    return {};
}

std::string output_dir(const ExperimentConfig& cfg) {
    const char* env = std::getenv("HJHOMOG_OUTPUT_ROOT");
    const fs::path root = (env && *env) ? fs::path(env) : fs::path(cfg.outputRoot);
    const std::string name =
        cfg.outputName.empty() ? std::string(experiment_name(cfg.kind)) + "-" + hex64(cfg.hash).substr(0, 12)
                               : cfg.outputName;
    return (root / name).string();
}

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double x, int prec = 6) {
    std::ostringstream os;
    os << std::setprecision(prec) << x;
    return os.str();
}

/// Collects files, timings and assertions of one run and keeps the manifest
/// on disk up to date.
class Recorder {
public:
    Recorder(const ExperimentConfig& cfg, std::string dir) : cfg_(cfg), dir_(std::move(dir)), start_(Clock::now()) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) fail(ErrorCode::Config, "output: cannot create " + dir_ + " (" + ec.message() + ")");
        out_.outputDir = dir_;
        write_manifest("running", "");
    }

    template <class F>
    auto stage(const std::string& name, F&& body) {
        const auto t0 = Clock::now();
        if constexpr (std::is_void_v<decltype(body())>) {
            body();
            stages_.emplace_back(name, seconds_since(t0));
        } else {
            auto r = body();
            stages_.emplace_back(name, seconds_since(t0));
            return r;
        }
    }

    void file(const std::string& name, const std::string& content) {
        const fs::path p = fs::path(dir_) / name;
        std::ofstream f(p, std::ios::binary);
        f << content;
        if (!f) fail(ErrorCode::Numeric, "cannot write " + p.string());
        files_.push_back(name);
    }

    void existing(const std::string& path) { files_.push_back(fs::path(path).filename().string()); }

    void check(const std::string& name, bool pass, const std::string& detail) {
        out_.assertions.push_back({name, pass, detail});
    }

    RunOutcome finish(const std::string& summary) {
        out_.summary = summary;
        file("summary.json", summary + "\n");
        out_.files = files_;
        write_manifest(out_.pass() ? "passed" : "failed", out_.first_failure());
        return out_;
    }

    void abort(const std::string& why) {
        try {
            write_manifest("error", why);
        } catch (...) {
        }
    }

    const std::string& dir() const { return dir_; }

private:
    static double seconds_since(Clock::time_point t0) {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    void write_manifest(const std::string& status, const std::string& note) {
        ojson m;
        m["tool"] = "hjhomog";
        m["version"] = HJHOMOG_VERSION;
        m["experiment"] = experiment_name(cfg_.kind);
        m["config_hash"] = hex64(cfg_.hash);
        m["model"] = cfg_.modelName.empty() ? json(nullptr) : json(cfg_.modelName);
        if (!cfg_.modelName.empty()) m["model_digest"] = hex64(make_model(cfg_.modelName, cfg_.params, cfg_.dim)->digest());
        m["seed"] = cfg_.seed;
        m["workers"] = cfg_.workers;
        m["status"] = status;
        if (!note.empty()) m["note"] = note;
        m["wall_seconds"] = seconds_since(start_);
        ojson st = ojson::array();
        for (const auto& [n, s] : stages_) st.push_back({{"stage", n}, {"seconds", s}});
        m["stages"] = st;
        ojson inv = ojson::array();
        for (const auto& f : files_) {
            std::error_code ec;
            const auto bytes = fs::file_size(fs::path(dir_) / f, ec);
            inv.push_back({{"path", f}, {"bytes", ec ? 0 : bytes}});
        }
        m["files"] = inv;
        ojson as = ojson::array();
        for (const auto& a : out_.assertions) as.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
        m["assertions"] = as;
        m["config"] = json::parse(cfg_.canonical);
        std::ofstream f(fs::path(dir_) / "manifest.json", std::ios::binary);
        f << m.dump(2) << "\n";
    }

    const ExperimentConfig& cfg_;
    std::string dir_;
    Clock::time_point start_;
    std::vector<std::pair<std::string, double>> stages_;
    std::vector<std::string> files_;
    RunOutcome out_;
};

LagrangianView view_of(const ExperimentConfig& cfg) {
    return LagrangianView::analytic(make_model(cfg.modelName, cfg.params, cfg.dim));
}

ojson base_summary(const ExperimentConfig& cfg) {
    ojson s;
    s["experiment"] = experiment_name(cfg.kind);
    if (!cfg.modelName.empty()) s["model"] = cfg.modelName;
    s["config_hash"] = hex64(cfg.hash);
    return s;
}

std::string slice_csv(const GridField& g, std::size_t k, const Vec& tilt, const std::string& column,
                      double unreached = std::numeric_limits<double>::infinity()) {
    std::ostringstream os;
    os.precision(12);
    const int dim = g.lattice.dim;
    os << (dim == 2 ? "x1,x2," : "x,") << column << "\n";
    const auto& v = g.slices[k];
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] >= unreached) continue;
        const Vec x = g.lattice.node(i);
        os << x[0] << ',';
        if (dim == 2) os << x[1] << ',';
        os << v[i] + dot(tilt, x) << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------- fundamental

Curve random_curve(std::mt19937_64& rng, int dim, const Vec& base, double T, double speed, double radius) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const int segs = 1 + int(rng() % 4);
    Curve c;
    c.dim = dim;
    c.t.push_back(0.0);
    c.x.push_back(base);
    Vec x = base;
    for (int k = 1; k <= segs; ++k) {
        const double dt = T / segs;
        Vec step{0.0, 0.0};
        for (int d = 0; d < dim; ++d) step[d] = U(rng);
        const double n = norm(step);
        if (n > 1.0) step = (1.0 / n) * step;
        Vec nx = x + (speed * dt) * step;
        for (int d = 0; d < dim; ++d) nx[d] = std::clamp(nx[d], base[d] - radius, base[d] + radius);
        x = nx;
        c.t.push_back(k == segs ? T : k * dt);
        c.x.push_back(x);
    }
    return c;
}

RunOutcome run_fundamental(const ExperimentConfig& cfg, Recorder& rec) {
    const auto& f = cfg.fundamental;
    const LagrangianView view = view_of(cfg);
    const FundamentalResult res = rec.stage("solve", [&] { return solve_m(view, f.base, f.c, f.T, f.grid, f.scheme); });
    const FundamentalField& field = res.field;
    const std::size_t last = field.grid.slice_count() - 1;
    const double unreached = field.c + 0.5 * kSentinelSlope;

    rec.stage("write", [&] {
        rec.file("m_final.csv", slice_csv(field.grid, last, {0.0, 0.0}, "m", unreached));
        write_field_binary(field, (fs::path(rec.dir()) / "field.bin").string());
        rec.existing("field.bin");
    });

    ojson s = base_summary(cfg);
    s["T"] = field.T;
    s["steps"] = field.steps;
    s["h"] = field.h();
    s["dt"] = field.scheme.dt;
    s["dv"] = field.dv;
    s["tolerance"] = field.tolerance();
    s["guard"] = {{"counted", field.guardCounted}, {"boundary", field.guardBoundary}};

    if (f.closedFormTol >= 0.0) {
        if (view.model()->family() != Family::QuadraticFree)
            fail(ErrorCode::Config, "fundamental.closed_form_tol: only the quadratic-free model has a closed form");
        double err = 0.0;
        const auto& v = field.grid.slices[last];
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Vec x = field.grid.lattice.node(i);
            const double r = norm(x - field.base);
            if (r > 1.0 + 1e-12 || r > f.grid.radius + 1e-12) continue;
            err = std::max(err, std::abs(v[i] - (field.c + 0.5 * r * r / field.T)));
        }
        s["closed_form_error"] = err;
        rec.check("closed-form", err <= f.closedFormTol,
                  "sup |m - c - |x-y|^2/2T| = " + fmt(err) + " (tol " + fmt(f.closedFormTol) + ")");
    }
    if (f.scheme == Scheme::Picard) {
        const auto& c = res.certificate;
        s["picard"] = {{"iterations", c.iterations},
                       {"theoretical_bound", double(c.theoreticalBound)},
                       {"empirical_residual", c.empiricalResidual},
                       {"converged", c.converged}};
        rec.check("picard-certificate", c.converged,
                  "n = " + std::to_string(c.iterations) + ", (KT)^n/n! = " + fmt(double(c.theoreticalBound)) +
                      ", residual " + fmt(c.empiricalResidual));
        std::ostringstream csv;
        csv.precision(10);
        csv << "iteration,residual,bound\n";
        for (std::size_t i = 0; i < c.residuals.size(); ++i)
            csv << i + 1 << ',' << c.residuals[i] << ',' << double(c.bounds[i]) << "\n";
        rec.file("picard.csv", csv.str());
    }

    // Herglotz domination on seeded random curves inside the cone.
    const int curves = 32;
    std::mt19937_64 rng(cfg.seed);
    const double speed = 0.8 * std::min(field.scheme.vmax, f.grid.radius / field.T);
    int violations = 0;
    double worst = -std::numeric_limits<double>::infinity();
    std::ostringstream hcsv;
    hcsv.precision(10);
    hcsv << "curve,m,xi,margin\n";
    rec.stage("herglotz", [&] {
        for (int k = 0; k < curves; ++k) {
            const Curve c = random_curve(rng, view.dim(), field.base, field.T, speed, 0.9 * f.grid.radius);
            const HerglotzPath path = integrate_xi(view, c, field.c);
            const UpperBoundResult ub = upper_bound_check(field, path, 3.0 * field.tolerance());
            worst = std::max(worst, ub.margin);
            if (!ub.pass) ++violations;
            hcsv << k << ',' << ub.m << ',' << ub.xi << ',' << ub.margin << "\n";
        }
    });
    rec.file("herglotz.csv", hcsv.str());
    s["herglotz"] = {{"curves", curves}, {"violations", violations}, {"worst_margin", worst}};
    rec.check("herglotz-domination", violations == 0,
              std::to_string(violations) + " of " + std::to_string(curves) + " curves above xi + 3 tol (worst margin " +
                  fmt(worst) + ")");

    rec.file("plot.gp",
             "set datafile separator ','\nset xlabel 'x'\nset ylabel 'm(T,x)'\n"
             "plot 'm_final.csv' using 1:" + std::string(view.dim() == 2 ? "3" : "2") +
                 " with points pt 7 ps 0.3 title 'm'\n");
    return rec.finish(s.dump(2));
}

// --------------------------------------------------------------------- cauchy

RunOutcome run_cauchy(const ExperimentConfig& cfg, Recorder& rec) {
    const auto& c = cfg.cauchy;
    CauchyProblem prob{view_of(cfg), c.phi, c.epsilon, c.T, c.cell};
    ojson s = base_summary(cfg);
    s["epsilon"] = c.epsilon;
    s["T"] = c.T;
    std::vector<SolutionField> fields;
    std::vector<Backend> backends;
    if (c.rescaled) backends.push_back(Backend::Rescaled);
    if (c.composition) backends.push_back(Backend::Composition);
    for (Backend b : backends) {
        fields.push_back(rec.stage(std::string("solve-") + backend_name(b), [&] { return solve_cauchy(prob, b); }));
        const SolutionField& u = fields.back();
        const std::string tag = backend_name(b);
        rec.file("u_" + tag + ".csv", slice_csv(u.grid, u.grid.slice_count() - 1, u.tilt, "u"));

        const EnvelopeResult env = envelope_check(u, prob);
        rec.check("envelope-" + tag, env.pass,
                  "M = " + fmt(env.M) + ", upper " + fmt(env.upper) + ", lower " + fmt(env.lower) + ", tol " +
                      fmt(env.tol));
        double worstRatio = 0.0;
        bool expOk = true;
        const double ds = prob.grid.outputDt;
        for (double t : {0.0, 0.25 * c.T, 0.5 * c.T}) {
            if (t + ds > c.T + 1e-12) continue;
            const double tt = u.grid.times[u.slice_at(t)];
            const ExpansivenessResult ex = expansiveness_check(u, prob, ds, tt);
            worstRatio = std::max(worstRatio, ex.ratio);
            expOk = expOk && ex.pass;
        }
        rec.check("expansiveness-" + tag, expOk, "worst ratio " + fmt(worstRatio) + " (limit 1.05)");
        s[tag] = {{"dx", u.dx},
                  {"dt", u.dt},
                  {"dv", u.dv},
                  {"resolution", u.resolution()},
                  {"envelope", {{"M", env.M}, {"upper", env.upper}, {"lower", env.lower}, {"tol", env.tol}}},
                  {"expansiveness_ratio", worstRatio}};
    }
    if (fields.size() == 2) {
        const double gap = field_gap(fields[0], fields[1]);
        const double res = std::max(fields[0].resolution(), fields[1].resolution());
        s["backend_gap"] = gap;
        rec.check("backend-equivalence", gap <= c.gapFactor * res,
                  "sup gap " + fmt(gap) + " vs " + fmt(c.gapFactor) + " x resolution " + fmt(res));
    }
    const std::string first = std::string("u_") + backend_name(backends.front()) + ".csv";
    rec.file("plot.gp", "set datafile separator ','\nset xlabel 'x'\nset ylabel 'u(x,T)'\nplot '" + first +
                            "' using 1:2 with lines title 'u^eps'\n");
    return rec.finish(s.dump(2));
}

// ------------------------------------------------------------------ effective

RunOutcome run_effective(const ExperimentConfig& cfg, Recorder& rec) {
    const auto& e = cfg.effective;
    const LagrangianView view = view_of(cfg);
    EffectiveTable table = rec.stage("Lbar", [&] {
        return estimate_Lbar(view, uniform_axis(e.vLo, e.vHi, e.vStep), e.epsilons, e.grid);
    });
    rec.stage("Hbar", [&] { estimate_Hbar(table, uniform_axis(e.pLo, e.pHi, e.pStep)); });
    rec.file("Lbar.csv", table.Lbar_csv());
    rec.file("Hbar.csv", table.Hbar_csv());

    const double conv = convexity_defect(table);
    const double sup = superlinearity_defect(table);
    const double rt = legendre_roundtrip_gap(table);
    const double tol = table.schemeTolerance + e.defectTol;
    const auto flagged = std::count(table.unstable.begin(), table.unstable.end(), true);
    rec.check("Lbar-convexity", conv <= tol, "midpoint defect " + fmt(conv) + " (tol " + fmt(tol) + ")");
    rec.check("Lbar-superlinearity", sup <= tol, "growth defect " + fmt(sup) + " (tol " + fmt(tol) + ")");

    ojson s = base_summary(cfg);
    s["epsilons"] = table.epsList;
    s["scheme_tolerance"] = table.schemeTolerance;
    s["convexity_defect"] = conv;
    s["superlinearity_defect"] = sup;
    s["legendre_roundtrip_gap"] = rt;
    s["unstable_points"] = flagged;
    s["Hbar_unattained"] = std::count(table.HbarUnattained.begin(), table.HbarUnattained.end(), true);
    rec.file("plot.gp",
             "set datafile separator ','\nset key top center\nset multiplot layout 1,2\n"
             "plot 'Lbar.csv' using 1:2 with linespoints title 'Lbar'\n"
             "plot 'Hbar.csv' using 1:2 with linespoints title 'Hbar'\nunset multiplot\n");
    return rec.finish(s.dump(2));
}

// ----------------------------------------------------------------------- rate

RunOutcome run_rate(const ExperimentConfig& cfg, Recorder& rec) {
    const RateReport r = rec.stage("rate", [&] { return rate_experiment(view_of(cfg), cfg.rate); });
    rec.file("rate.csv", r.to_csv());
    rec.file("rate.json", r.to_json() + "\n");
    if (cfg.rate.control) {
        std::ostringstream os;
        os << "controls " << (r.controlsPass ? "pass" : "fail") << ": largest relative change "
           << fmt(r.controlChange.empty() ? 0.0 : *std::max_element(r.controlChange.begin(), r.controlChange.end()))
           << " (threshold " << fmt(cfg.rate.controlThreshold) << ")";
        rec.check("refinement-controls", r.valid, os.str() + (r.valid ? "" : "; report INVALID"));
    }
    rec.check("rate-slope", r.slope >= cfg.rate.slopeLo && r.slope <= cfg.rate.slopeHi,
              "log-log slope " + fmt(r.slope) + " against [" + fmt(cfg.rate.slopeLo) + ", " + fmt(cfg.rate.slopeHi) +
                  "]");
    ojson s = base_summary(cfg);
    s["report"] = json::parse(r.to_json());
    rec.file("plot.gp", "set datafile separator ','\nset logscale xy\nset xlabel 'epsilon'\nset ylabel 'sup error'\n"
                        "plot 'rate.csv' using 1:2 with linespoints title 'e(eps)'\n");
    return rec.finish(s.dump(2));
}

// ------------------------------------------------------------------ corrector

RunOutcome run_corrector(const ExperimentConfig& cfg, Recorder& rec) {
    const auto& c = cfg.corrector;
    const LagrangianView view = view_of(cfg);
    CellGrid grid = c.cell;
    const bool probe = c.probeTol > 0.0;
    if (probe) grid.storeDtau = grid.dtau;  // the probe differences consecutive time steps
    const InitialDatum w0 = c.w0;
    const int dim = cfg.dim;
    const CellRun run = rec.stage("cell", [&] {
        return solve_cell(view, c.p, [&](const Vec& y) { return w0(y, dim); }, c.tauMax, grid);
    });
    const DriftEstimate drift = extract_Hbar_drift(run);
    const CorrectorField corr = corrector_extract(run, drift.value, c.boundTol);

    std::ostringstream csv;
    csv.precision(10);
    csv << "tau,sup_abs,oscillation\n";
    const std::size_t every = std::max<std::size_t>(1, run.w.times.size() / 2000);
    for (std::size_t k = 0; k < run.w.times.size(); ++k)
        if (k % every == 0 || k + 1 == run.w.times.size())
            csv << run.w.times[k] << ',' << corr.supAbs[k] << ',' << corr.oscillation[k] << "\n";
    rec.file("corrector.csv", csv.str());
    rec.file("v_final.csv", slice_csv(corr.v, corr.v.slice_count() - 1, {0.0, 0.0}, "v"));

    ojson s = json::parse(cell_summary_json(run, drift, corr));
    s["experiment"] = "corrector";
    s["model"] = cfg.modelName;
    rec.check("corrector-bounded", corr.bounded,
              "sup|v| = " + fmt(corr.C) + ", growth rate " + fmt(corr.growthRate));
    rec.check("drift-stable", !drift.flagged,
              "Hbar in [" + fmt(drift.lo) + ", " + fmt(drift.hi) + "]");
    if (probe) {
        const InfSupResult member = rec.stage("inf-sup", [&] {
            return inf_sup_probe(corr, *view.model(), drift.value, c.probeTol, c.probeFrom);
        });
        s["inf_sup"] = {{"c", member.c}, {"margin", member.margin}, {"kink_fraction", member.kinkFraction}};
        rec.check("inf-sup-membership", member.pass,
                  "margin " + fmt(member.margin) + " at c = Hbar (tol " + fmt(c.probeTol) + ")");
    }
    rec.file("plot.gp", "set datafile separator ','\nset xlabel 'tau'\n"
                        "plot 'corrector.csv' using 1:2 with lines title 'sup|v|', "
                        "'corrector.csv' using 1:3 with lines title 'osc v'\n");
    return rec.finish(s.dump(2));
}

// ------------------------------------------------------------------ transport

RunOutcome run_transport(const ExperimentConfig& cfg, Recorder& rec) {
    const auto& t = cfg.transport;
    const EffectiveSpeed sp = rec.stage("speed", [&] { return effective_speed(t.F); });
    ojson s = base_summary(cfg);
    s["field"] = t.F.str();
    s["xi"] = sp.xi;
    s["pinned"] = sp.pinned;
    s["zeros"] = sp.zeros;
    s["ode_xi"] = sp.odeXi;
    s["ode_gap"] = sp.odeGap;
    rec.check("ode-agreement", sp.odeGap <= 2e-3, "|xi - ode xi| = " + fmt(sp.odeGap) + " (limit 0.002)");

    const double eps = t.epsilons.empty() ? 1e-3 : t.epsilons.back();
    const double a = sp.pinned ? eps * (sp.zeros.front() + 0.3) : 0.0;
    const Trajectory tr = rec.stage("trajectory", [&] { return integrate_char(t.F, eps, a, t.T, 0.0, 1024); });
    std::ostringstream csv;
    csv.precision(12);
    csv << "a,t,y\n";
    for (std::size_t k = 0; k < tr.t.size(); ++k) csv << a << ',' << tr.t[k] << ',' << tr.y[k] << "\n";
    rec.file("trajectory.csv", csv.str());
    if (sp.pinned) {
        double excursion = 0.0;
        for (double y : tr.y) excursion = std::max(excursion, std::abs(y - a));
        s["pinned_excursion"] = excursion;
        rec.check("pinned-orbit", excursion <= eps, "orbit excursion " + fmt(excursion) + " (one cell " + fmt(eps) + ")");
    }
    if (!t.epsilons.empty()) {
        const TransportRateReport r = rec.stage("rate", [&] {
            return transport_rate(t.F, t.phi, t.T, t.epsilons, t.xLo, t.xHi, t.samples, t.slopeLo, t.slopeHi);
        });
        rec.file("transport_rate.csv", r.to_csv());
        s["rate"] = json::parse(r.to_json());
        rec.check("transport-rate", r.pass,
                  "slope " + fmt(r.slope) + " against [" + fmt(t.slopeLo) + ", " + fmt(t.slopeHi) + "]");
    }
    rec.file("plot.gp", "set datafile separator ','\nset xlabel 't'\nset ylabel 'y'\n"
                        "plot 'trajectory.csv' using 2:3 with lines title 'characteristic'\n");
    return rec.finish(s.dump(2));
}

// --------------------------------------------------------------------- holder

RunOutcome run_holder(const ExperimentConfig& cfg, Recorder& rec) {
    const auto& h = cfg.holder;
    const LagrangianView view = view_of(cfg);
    const HolderSpec spec = holder_spec(*view.model());
    ModulusOptions opt = h.modulus;
    opt.seed = cfg.seed;
    std::vector<double> Cs;
    ojson runs = ojson::array();
    std::ostringstream table;
    table.precision(10);
    table << "epsilon,C,x_fit,t_fit\n";
    std::string scatter;
    for (double eps : h.epsilons) {
        CauchyProblem prob{view, h.phi, eps, h.T, h.cell};
        const SolutionField u = rec.stage("solve-eps-" + fmt(eps), [&] { return solve_cauchy(prob, Backend::Rescaled); });
        const ModulusResult m = measure_modulus(u, spec, opt);
        Cs.push_back(m.C);
        table << eps << ',' << m.C << ',' << m.xFit << ',' << m.tFit << "\n";
        runs.push_back({{"epsilon", eps}, {"C", m.C}, {"pairs", m.pairs}, {"x_fit", m.xFit}, {"t_fit", m.tFit}});
        scatter = m.to_csv();
    }
    rec.file("modulus.csv", table.str());
    rec.file("scatter.csv", scatter);
    const double cmax = *std::max_element(Cs.begin(), Cs.end());
    const double cmin = *std::min_element(Cs.begin(), Cs.end());
    const double spread = cmax > 0.0 ? (cmax - cmin) / cmax : 0.0;
    const bool finite = std::all_of(Cs.begin(), Cs.end(), [](double x) { return std::isfinite(x); });
    rec.check("modulus-finite", finite, "C = " + fmt(cmin) + " .. " + fmt(cmax));
    rec.check("modulus-stability", spread <= h.stability,
              "relative spread " + fmt(spread) + " (limit " + fmt(h.stability) + ")");

    ojson s = base_summary(cfg);
    s["exponents"] = {{"x", spec.xExponent}, {"t", spec.tExponent}};
    if (spec.exact) s["exponents_exact"] = {{"x", spec.xExponentExact.str()}, {"t", spec.tExponentExact.str()}};
    s["epsilons"] = h.epsilons;
    s["runs"] = runs;
    s["spread"] = spread;
    rec.file("plot.gp", "set datafile separator ','\nset logscale xy\nset xlabel 'distance'\nset ylabel 'oscillation'\n"
                        "plot 'scatter.csv' using 1:3 with points pt 7 ps 0.2 title 'pairs'\n");
    return rec.finish(s.dump(2));
}

// ----------------------------------------------------------------- verify

RunOutcome run_verify(const ExperimentConfig& cfg, Recorder& rec) {
    const ModelPtr m = make_model(cfg.modelName, cfg.params, cfg.dim);
    const AssumptionReport r =
        rec.stage("assumptions", [&] { return verify_assumptions(*m, cfg.verify.samples, cfg.verify.tol); });
    rec.file("assumptions.json", r.to_json() + "\n");
    std::ostringstream csv;
    csv.precision(10);
    csv << "assumption,worst,tol,pass\n";
    for (const auto& e : r.entries) {
        csv << e.name << ',' << e.worst << ',' << e.tol << ',' << (e.pass ? 1 : 0) << "\n";
        rec.check(e.name, e.pass, "worst " + fmt(e.worst) + " (tol " + fmt(e.tol) + ")" + (e.note.empty() ? "" : "; " + e.note));
    }
    rec.file("assumptions.csv", csv.str());
    rec.file("plot.gp", "set datafile separator ','\nset style data histograms\nset logscale y\n"
                        "plot 'assumptions.csv' using 2:xtic(1) title 'worst residual'\n");
    return rec.finish(json::parse(r.to_json()).dump(2));
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg) {
#ifdef HJHOMOG_HAVE_OPENMP
    if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
#endif
    Recorder rec(cfg, output_dir(cfg));
    try {
        switch (cfg.kind) {
            case ExperimentKind::Fundamental: return run_fundamental(cfg, rec);
            case ExperimentKind::Cauchy: return run_cauchy(cfg, rec);
            case ExperimentKind::Effective: return run_effective(cfg, rec);
            case ExperimentKind::Rate: return run_rate(cfg, rec);
            case ExperimentKind::Corrector: return run_corrector(cfg, rec);
            case ExperimentKind::Transport: return run_transport(cfg, rec);
            case ExperimentKind::Holder: return run_holder(cfg, rec);
            case ExperimentKind::VerifyModel: return run_verify(cfg, rec);
        }
    } catch (const std::exception& e) {
        rec.abort(e.what());
        throw;
    }
    fail(ErrorCode::Unsupported, "unhandled experiment kind");
}

RunOutcome verify_experiment(const ExperimentConfig& cfg) {
    RunOutcome out;
    out.outputDir = output_dir(cfg);
    out.assertions.push_back({"schema", true, "config hash " + hex64(cfg.hash)});
    ojson s = base_summary(cfg);
    if (!cfg.modelName.empty()) {
        const ModelPtr m = make_model(cfg.modelName, cfg.params, cfg.dim);
        const AssumptionReport r = verify_assumptions(*m, std::min(cfg.verify.samples, 2000), cfg.verify.tol);
        for (const auto& e : r.entries) out.assertions.push_back({e.name, e.pass, "worst " + fmt(e.worst)});
        s["assumptions"] = json::parse(r.to_json());
    }
    if (cfg.kind == ExperimentKind::Corrector) {
        // Rejects irrational slopes before any compute.
        for (int d = 0; d < cfg.dim; ++d) Rational::from_double(cfg.corrector.p[d], 8);
    }
    s["output_dir"] = out.outputDir;
    out.summary = s.dump(2);
    return out;
}

}  // namespace hjh
