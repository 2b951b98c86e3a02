#include "hjhomog/model.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sampling.hpp"

namespace hjh {

namespace {

double cos_sum(const Vec& y, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += std::cos(kTwoPi * y[i]);
    return s;
}

double radial_norm(const Vec& p, int dim) { return dim == 1 ? std::abs(p[0]) : norm(p); }

void check_finite(const Vec& y, double r, const Vec& p, int dim, const char* what) {
    if (!all_finite(y, dim) || !std::isfinite(r) || !all_finite(p, dim))
        fail(ErrorCode::InvalidArgument, std::string("non-finite input to ") + what);
}

struct FamilyInfo {
    Family family;
    const char* name;
    std::set<std::string> keys;
};

const std::vector<FamilyInfo>& families() {
    static const std::vector<FamilyInfo> table = {
        {Family::QuadraticFree, "quadratic-free", {}},
        {Family::QuadraticPotential, "quadratic-potential", {"amplitude"}},
        {Family::SineGordon, "sine-gordon", {"amplitude"}},
        {Family::Dislocation, "dislocation", {"c0", "c1", "c2", "delta", "R", "enforce"}},
        {Family::TransportDerived, "transport-derived", {"f0", "f1"}},
        {Family::CustomAnalytic, "custom-analytic", {"q", "r_amplitude", "y_amplitude"}},
    };
    return table;
}

const FamilyInfo* find_family(const std::string& name) {
    for (const auto& f : families())
        if (name == f.name) return &f;
    return nullptr;
}

double get(const ParamMap& m, const std::string& key, double dflt) {
    auto it = m.find(key);
    return it == m.end() ? dflt : it->second;
}

}  // namespace

const char* family_name(Family f) {
    for (const auto& info : families())
        if (info.family == f) return info.name;
    return "unknown";
}

// ---------------------------------------------------------------------------
// staircase

double StaircaseSmoother::eval(double r) const {
    return r + (1.0 - delta) * std::sin(kTwoPi * r) / kTwoPi;
}

double StaircaseSmoother::derivative(double r) const {
    return 1.0 + (1.0 - delta) * std::cos(kTwoPi * r);
}

double StaircaseSmoother::invert(double u) const {
    // |E(r) - r| <= (1-delta)/(2 pi) < 1/2, so the root lies in [u - 1/2, u + 1/2].
    double lo = u - 0.5, hi = u + 0.5;
    double r = u;
    for (int it = 0; it < 100; ++it) {
        double g = eval(r) - u;
        if (std::abs(g) <= newtonTol) return r;
        if (g > 0) hi = r; else lo = r;
        double step = g / derivative(r);
        double next = r - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == r) return r;
        r = next;
    }
    if (std::abs(eval(r) - u) <= 10 * newtonTol) return r;
    fail(ErrorCode::Numeric, "staircase inversion did not converge");
}

double staircase_eval(const StaircaseSmoother& s, double r) { return s.eval(r); }
double staircase_invert(const StaircaseSmoother& s, double u) { return s.invert(u); }

// ---------------------------------------------------------------------------
// HamiltonianModel

double HamiltonianModel::c_field(const Vec& y) const {
    double c = c0_ + c1_ * std::cos(kTwoPi * y[0]);
    if (dim_ == 2) c += c2_ * std::cos(kTwoPi * y[1]);
    return c;
}

double HamiltonianModel::free_speed(const Vec& y, double r) const {
    // r - E^{-1}(r) is 1-periodic; evaluate it on the fractional part so that
    // integer shifts of r give bitwise identical results.
    double f = frac(r);
    return c_field(y) - (f - stair_.invert(f));
}

double HamiltonianModel::radial_lagrangian(double a, double s) const {
    if (s <= a) return 0.0;
    if (s <= R_) return R_ * (s - a);
    return 0.5 * s * s + 0.5 * R_ * R_ - a * R_;
}

double HamiltonianModel::H(const Vec& y, double r, const Vec& p) const {
    check_finite(y, r, p, dim_, "eval_H");
    const double pn = radial_norm(p, dim_);
    switch (family_) {
        case Family::QuadraticFree:
            return 0.5 * pn * pn;
        case Family::QuadraticPotential:
            return 0.5 * pn * pn + amp_ * cos_sum(y, dim_);
        case Family::SineGordon:
            return 0.5 * pn * pn - amp_ * std::cos(kTwoPi * frac(r));
        case Family::TransportDerived:
            return pn * pn - (f0_ + f1_ * std::sin(kTwoPi * frac(r)));
        case Family::CustomAnalytic:
            return std::pow(pn, q_) / q_ + aR_ * std::cos(kTwoPi * frac(r)) + bY_ * cos_sum(y, dim_);
        case Family::Dislocation: {
            double a = free_speed(y, r);
            if (pn <= R_) return a * pn;
            return 0.5 * pn * pn - 0.5 * R_ * R_ + a * R_;
        }
    }
    return 0.0;
}

double HamiltonianModel::kinetic(const Vec& v) const {
    const double s = radial_norm(v, dim_);
    switch (family_) {
        case Family::QuadraticFree:
        case Family::QuadraticPotential:
        case Family::SineGordon:
            return 0.5 * s * s;
        case Family::TransportDerived:
            return 0.25 * s * s;
        case Family::CustomAnalytic:
            return std::pow(s, qDual_) / qDual_;
        case Family::Dislocation:
            break;
    }
    fail(ErrorCode::Unsupported, "kinetic part requested for a non-separable family");
}

double HamiltonianModel::potential(const Vec& y, double r) const {
    switch (family_) {
        case Family::QuadraticFree:
            return 0.0;
        case Family::QuadraticPotential:
            return -amp_ * cos_sum(y, dim_);
        case Family::SineGordon:
            return amp_ * std::cos(kTwoPi * frac(r));
        case Family::TransportDerived:
            return f0_ + f1_ * std::sin(kTwoPi * frac(r));
        case Family::CustomAnalytic:
            return -aR_ * std::cos(kTwoPi * frac(r)) - bY_ * cos_sum(y, dim_);
        case Family::Dislocation:
            break;
    }
    fail(ErrorCode::Unsupported, "potential part requested for a non-separable family");
}

double HamiltonianModel::L(const Vec& y, double r, const Vec& v) const {
    check_finite(y, r, v, dim_, "eval_L");
    if (family_ == Family::Dislocation) return radial_lagrangian(free_speed(y, r), radial_norm(v, dim_));
    return kinetic(v) + potential(y, r);
}

double HamiltonianModel::default_vmax(double lip) const {
    // Beyond V*, moving at speed |v| costs more than standing still, even after
    // crediting the best possible gain (1+lip)|v| from the datum.
    const int ny = dim_ == 1 ? 12 : 6, nr = 12;
    auto inf_sup = [&](const Vec& v, bool inf) {
        double best = inf ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
        for (int i = 0; i < ny; ++i)
            for (int j = 0; j < (dim_ == 2 ? ny : 1); ++j)
                for (int k = 0; k < nr; ++k) {
                    Vec y{double(i) / ny, double(j) / ny};
                    double val = L(y, double(k) / nr, v);
                    best = inf ? std::min(best, val) : std::max(best, val);
                }
        return best;
    };
    const double still = inf_sup({0.0, 0.0}, false);
    double vstar = 0.0;
    const double h = 1.0 / 16.0;
    std::vector<Vec> dirs = {{1.0, 0.0}, {-1.0, 0.0}};
    if (dim_ == 2) {
        const double s = std::sqrt(0.5);
        dirs.push_back({s, s});
        dirs.push_back({0.0, 1.0});
    }
    for (double s = h; s <= 64.0; s += h)
        for (const auto& d : dirs)
            if (inf_sup(s * d, true) - (1.0 + lip) * s < still) vstar = s;
    return 2.0 * (vstar + h);
}

std::uint64_t HamiltonianModel::digest() const {
    std::ostringstream os;
    os.precision(17);
    os << name_ << '|' << dim_;
    for (const auto& [k, v] : params_) os << '|' << k << '=' << v;
    const std::string s = os.str();
    return detail::fnv1a(s.data(), s.size());
}

void HamiltonianModel::finalize() {
    // K: sup |dH/dr| on a 64^n x 64 (y, r) grid and a set of momenta.
    std::vector<double> radii = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
    if (family_ == Family::Dislocation) {
        radii.push_back(R_);
        radii.push_back(2.0 * R_);
    }
    std::vector<Vec> moms;
    for (double rad : radii) {
        moms.push_back({rad, 0.0});
        if (dim_ == 2) moms.push_back({rad * std::sqrt(0.5), rad * std::sqrt(0.5)});
    }
    const int ny = 64, nr = 64;
    const double hr = 1e-6;
    double ksup = 0.0;
    const bool rcoupled = family_ == Family::SineGordon || family_ == Family::TransportDerived ||
                          family_ == Family::Dislocation ||
                          (family_ == Family::CustomAnalytic && aR_ != 0.0);
    if (rcoupled) {
        for (int i = 0; i < ny; ++i)
            for (int j = 0; j < (dim_ == 2 ? ny : 1); ++j)
                for (int k = 0; k < nr; ++k)
                    for (const auto& p : moms) {
                        Vec y{double(i) / ny, double(j) / ny};
                        double r = double(k) / nr;
                        double d = (H(y, r + hr, p) - H(y, r - hr, p)) / (2 * hr);
                        ksup = std::max(ksup, std::abs(d));
                    }
    }
    KSampled_ = ksup;
    K_ = 1.05 * ksup;

    switch (family_) {
        case Family::CustomAnalytic:
            q1_ = q2_ = q_;
            break;
        default:
            q1_ = q2_ = 2.0;
    }

    // alpha0 and beta0 from samples; both are inflated slightly.
    double a0 = 0.0, b0 = 0.0;
    const int na = 16;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < (dim_ == 2 ? na : 1); ++j)
            for (int k = 0; k < na; ++k)
                for (const auto& p : moms) {
                    Vec y{double(i) / na, double(j) / na};
                    a0 = std::max(a0, std::abs(H(y, double(k) / na, p) - H({0, 0}, 0.0, p)));
                }
    for (double s = 0.0; s <= 64.0; s += 1.0 / 16.0) {
        Vec p{s, 0.0};
        double h0 = H({0, 0}, 0.0, p);
        b0 = std::max(b0, h0 / (std::pow(s, q2_) + 1.0));
        double sq = std::pow(s, q1_);
        b0 = std::max(b0, 0.5 * (-h0 + std::sqrt(h0 * h0 + 4.0 * sq)));
    }
    alpha0_ = 1.05 * a0 + 1e-12;
    beta0_ = 1.05 * b0;
    vmax_ = default_vmax(0.0);
}

ModelPtr make_model(const std::string& name, const ParamMap& params, int dim) {
    const FamilyInfo* info = find_family(name);
    if (!info) fail(ErrorCode::Config, "unknown model '" + name + "'");
    if (dim != 1 && dim != 2) fail(ErrorCode::Config, "model dimension must be 1 or 2");
    for (const auto& [k, v] : params) {
        if (!info->keys.count(k))
            fail(ErrorCode::Config, "unknown parameter '" + k + "' for model '" + name + "'");
        if (!std::isfinite(v)) fail(ErrorCode::Config, "parameter '" + k + "' is not finite");
    }
    if (info->family == Family::Dislocation) {
        ParamMap cfield;
        for (const char* k : {"c0", "c1", "c2"})
            if (params.count(k)) cfield[k] = params.at(k);
        return build_dislocation(cfield, get(params, "delta", 0.1), get(params, "R", 10.0), dim,
                                 get(params, "enforce", 1.0) != 0.0);
    }
    std::shared_ptr<HamiltonianModel> m(new HamiltonianModel());
    m->family_ = info->family;
    m->name_ = info->name;
    m->dim_ = dim;
    m->params_ = params;
    switch (info->family) {
        case Family::QuadraticPotential:
        case Family::SineGordon:
            m->amp_ = get(params, "amplitude", 1.0);
            m->params_["amplitude"] = m->amp_;
            break;
        case Family::TransportDerived:
            m->f0_ = get(params, "f0", 2.0);
            m->f1_ = get(params, "f1", 1.0);
            m->params_["f0"] = m->f0_;
            m->params_["f1"] = m->f1_;
            break;
        case Family::CustomAnalytic:
            m->q_ = get(params, "q", 4.0);
            if (!(m->q_ > 1.0)) fail(ErrorCode::Config, "custom-analytic requires q > 1");
            m->qDual_ = m->q_ / (m->q_ - 1.0);
            m->aR_ = get(params, "r_amplitude", 0.0);
            m->bY_ = get(params, "y_amplitude", 0.0);
            m->params_["q"] = m->q_;
            m->params_["r_amplitude"] = m->aR_;
            m->params_["y_amplitude"] = m->bY_;
            break;
        default:
            break;
    }
    m->finalize();
    return m;
}

ModelPtr build_dislocation(const ParamMap& cField, double delta, double R, int dim, bool enforce) {
    for (const auto& [k, v] : cField)
        if (k != "c0" && k != "c1" && k != "c2")
            fail(ErrorCode::Config, "unknown c-field coefficient '" + k + "'");
    if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::Config, "dislocation requires delta in (0,1)");
    if (!(R > 0.0)) fail(ErrorCode::Config, "dislocation requires R > 0");
    std::shared_ptr<HamiltonianModel> m(new HamiltonianModel());
    m->family_ = Family::Dislocation;
    m->name_ = "dislocation";
    m->dim_ = dim;
    m->c0_ = get(cField, "c0", 0.75);
    m->c1_ = get(cField, "c1", 0.2);
    m->c2_ = dim == 2 ? get(cField, "c2", 0.0) : 0.0;
    m->R_ = R;
    m->stair_.delta = delta;
    m->params_ = {{"c0", m->c0_}, {"c1", m->c1_}, {"c2", m->c2_}, {"delta", delta}, {"R", R},
                  {"enforce", enforce ? 1.0 : 0.0}};
    const double cmin = m->c0_ - std::abs(m->c1_) - std::abs(m->c2_);
    if (enforce && !(cmin > 0.5)) {
        std::ostringstream os;
        os << "dislocation c-field has min c = " << cmin
           << " <= 1/2; the growth bounds (H6) and coercivity of the construction fail";
        fail(ErrorCode::Config, os.str());
    }
    // Seam continuity at |p| = R.
    for (double r : {0.0, 0.2, 0.37, 0.81}) {
        Vec y{0.3, 0.6};
        double a = m->free_speed(y, r);
        double inner = a * R;
        double outer = 0.5 * R * R - 0.5 * R * R + a * R;
        if (std::abs(inner - outer) > 1e-12 * std::max(1.0, std::abs(inner)))
            fail(ErrorCode::Numeric, "dislocation seam mismatch");
    }
    m->finalize();
    return m;
}

std::vector<std::string> list_models() {
    std::vector<std::string> out;
    for (const auto& f : families()) out.emplace_back(f.name);
    return out;
}

std::string describe_model(const std::string& name) {
    const FamilyInfo* info = find_family(name);
    if (!info) fail(ErrorCode::Config, "unknown model '" + name + "'");
    std::ostringstream os;
    os << "model: " << info->name << "\n";
    switch (info->family) {
        case Family::QuadraticFree:
            os << "H(y,r,p) = |p|^2/2\nL(y,r,v) = |v|^2/2\nparameters: none\n"
               << "growth: q1 = q2 = 2, K = 0\n";
            break;
        case Family::QuadraticPotential:
            os << "H(y,r,p) = |p|^2/2 + amplitude * sum_i cos(2 pi y_i)\n"
               << "L(y,r,v) = |v|^2/2 - amplitude * sum_i cos(2 pi y_i)\n"
               << "parameters: amplitude (default 1)\ngrowth: q1 = q2 = 2, K = 0 (no r-coupling)\n";
            break;
        case Family::SineGordon:
            os << "H(y,r,p) = |p|^2/2 - amplitude * cos(2 pi r)\n"
               << "L(y,r,v) = |v|^2/2 + amplitude * cos(2 pi r)\n"
               << "parameters: amplitude (default 1)\ngrowth: q1 = q2 = 2, K = 2 pi amplitude\n";
            break;
        case Family::Dislocation:
            os << "H(y,r,p) = a(y,r)|p|                         for |p| <= R\n"
               << "H(y,r,p) = |p|^2/2 - R^2/2 + a(y,r) R         for |p| >  R\n"
               << "a(y,r)   = c(y) - (r - E^{-1}(r)),  E(r) = r + (1-delta) sin(2 pi r)/(2 pi)\n"
               << "c(y)     = c0 + c1 cos(2 pi y1) [+ c2 cos(2 pi y2)]\n"
               << "L(y,r,v) = 0 (|v| <= a), R(|v| - a) (a < |v| <= R), |v|^2/2 + R^2/2 - a R (|v| > R)\n"
               << "parameters: c0 (0.75), c1 (0.2), c2 (0), delta in (0,1) (0.1), R > 0 (10), enforce (1)\n"
               << "constraints: c(y) > 1/2 for all y, 0 < delta < 1, R > 0\n"
               << "growth: q1 = q2 = 2, K ~ R (1/delta - 1)\n";
            break;
        case Family::TransportDerived:
            os << "H(y,r,p) = |p|^2 - F(r),  F(r) = f0 + f1 sin(2 pi r)\n"
               << "L(y,r,v) = |v|^2/4 + F(r)\n"
               << "parameters: f0 (2), f1 (1)\ngrowth: q1 = q2 = 2, K = 2 pi |f1|\n"
               << "effective speed of y' = F(y/eps) equals -Hbar(0) when min F > 0\n";
            break;
        case Family::CustomAnalytic:
            os << "H(y,r,p) = |p|^q/q + r_amplitude cos(2 pi r) + y_amplitude sum_i cos(2 pi y_i)\n"
               << "L(y,r,v) = |v|^q'/q' - r_amplitude cos(2 pi r) - y_amplitude sum_i cos(2 pi y_i),"
                  " q' = q/(q-1)\n"
               << "parameters: q > 1 (4), r_amplitude (0), y_amplitude (0)\ngrowth: q1 = q2 = q\n";
            break;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// LagrangianView

LagrangianView LagrangianView::analytic(ModelPtr model) {
    require(model != nullptr, ErrorCode::InvalidArgument, "null model");
    LagrangianView v;
    v.mode_ = Mode::Analytic;
    v.dim_ = model->dim();
    v.K_ = model->K();
    v.separable_ = model->separable();
    v.profile_ = model->family() == Family::Dislocation;
    v.model_ = std::move(model);
    return v;
}

LagrangianView LagrangianView::tabulated(ModelPtr model, double pmax, int pointsPerAxis) {
    require(model != nullptr, ErrorCode::InvalidArgument, "null model");
    if (pointsPerAxis < 3 || !(pmax > 0.0))
        fail(ErrorCode::Config, "tabulated Lagrangian needs a non-empty momentum grid");
    LagrangianView v;
    v.mode_ = Mode::Tabulated;
    v.dim_ = model->dim();
    v.K_ = model->K();
    v.separable_ = model->separable();
    v.model_ = std::move(model);
    v.dp_ = 2.0 * pmax / (pointsPerAxis - 1);
    for (int i = 0; i < pointsPerAxis; ++i) v.pAxis_.push_back(-pmax + i * v.dp_);
    return v;
}

LagrangianView LagrangianView::custom(int dim, double K, Fn L) {
    LagrangianView v;
    v.mode_ = Mode::Custom;
    v.dim_ = dim;
    v.K_ = K;
    v.fn_ = std::move(L);
    return v;
}

LagrangianView LagrangianView::custom_separable(int dim, double K, KineticFn kin, PotentialFn pot) {
    LagrangianView v;
    v.mode_ = Mode::Custom;
    v.dim_ = dim;
    v.K_ = K;
    v.separable_ = true;
    v.kin_ = std::move(kin);
    v.pot_ = std::move(pot);
    return v;
}

namespace {

// Gain of the parabola through (-h, gm), (0, g0), (h, gp) over g0 at its vertex.
double parabolic_gain(double gm, double g0, double gp) {
    double curv = gm - 2.0 * g0 + gp;
    if (!(curv < 0.0) || g0 < gm || g0 < gp) return 0.0;
    return -(gm - gp) * (gm - gp) / (8.0 * curv);
}

}  // namespace

double LagrangianView::tabulated_L(const Vec& y, double r, const Vec& v) const {
    const auto& ax = pAxis_;
    const std::size_t n = ax.size();
    auto g = [&](std::size_t i, std::size_t j) {
        Vec p{ax[i], dim_ == 2 ? ax[j] : 0.0};
        return dot(v, p) - model_->H(y, r, p);
    };
    std::size_t bi = 0, bj = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < (dim_ == 2 ? n : 1); ++j)
        for (std::size_t i = 0; i < n; ++i) {
            double val = g(i, j);
            if (val > best) { best = val; bi = i; bj = j; }
        }
    double gain = 0.0;
    if (bi > 0 && bi + 1 < n) gain += parabolic_gain(g(bi - 1, bj), best, g(bi + 1, bj));
    if (dim_ == 2 && bj > 0 && bj + 1 < n) gain += parabolic_gain(g(bi, bj - 1), best, g(bi, bj + 1));
    return best + gain;
}

double LagrangianView::tabulated_kinetic(const Vec& v) const {
    // For separable families H(y,r,p) = h(p) - potential(y,r).
    const Vec o{0.0, 0.0};
    return tabulated_L(o, 0.0, v) - model_->potential(o, 0.0);
}

double LagrangianView::L(const Vec& y, double r, const Vec& v) const {
    switch (mode_) {
        case Mode::Analytic:
            return model_->L(y, r, v);
        case Mode::Tabulated:
            check_finite(y, r, v, dim_, "eval_L");
            return tabulated_L(y, r, v);
        case Mode::Custom:
            if (fn_) return fn_(y, r, v);
            return kin_(v) + pot_(y, r);
    }
    return 0.0;
}

double LagrangianView::kinetic(const Vec& v) const {
    switch (mode_) {
        case Mode::Analytic: return model_->kinetic(v);
        case Mode::Tabulated: return tabulated_kinetic(v);
        case Mode::Custom: return kin_(v);
    }
    return 0.0;
}

double LagrangianView::potential(const Vec& y, double r) const {
    if (mode_ == Mode::Custom) return pot_(y, r);
    return model_->potential(y, r);
}

double superlinearity_constant(const LagrangianView& view, double A, double vmax) {
    double k = -std::numeric_limits<double>::infinity();
    const int n = 256;
    for (int i = 0; i <= n; ++i) {
        double s = vmax * i / n;
        for (int j = 0; j < 8; ++j)
            for (int sgn : {-1, 1}) {
                Vec y{j / 8.0, (7 - j) / 8.0};
                Vec v{sgn * s, 0.0};
                k = std::max(k, A * s - view.L(y, 0.125 * j, v));
            }
    }
    return k;
}

// ---------------------------------------------------------------------------
// verify_assumptions

std::string AssumptionReport::to_json() const {
    nlohmann::json j;
    j["model"] = model;
    j["pass"] = pass;
    j["K"] = K;
    j["K_sampled"] = KSampled;
    j["checks"] = nlohmann::json::array();
    for (const auto& e : entries)
        j["checks"].push_back({{"name", e.name}, {"worst", e.worst}, {"tol", e.tol}, {"pass", e.pass},
                               {"note", e.note}});
    return j.dump(2);
}

AssumptionReport verify_assumptions(const HamiltonianModel& m, int budget, double tol) {
    if (budget < 100) fail(ErrorCode::InvalidArgument, "verify_assumptions needs sampleBudget >= 100");
    const int n = m.dim();
    AssumptionReport rep;
    rep.model = m.name();
    rep.K = m.K();
    rep.KSampled = m.K_sampled();
    const double pBox = 8.0;
    auto point = [&](std::uint64_t i, unsigned off, double lo, double hi) {
        Vec x{0.0, 0.0};
        for (int d = 0; d < n; ++d) x[d] = lo + (hi - lo) * detail::halton(i, off + d);
        return x;
    };
    auto add = [&](std::string name, double worst, bool pass, std::string note = {}) {
        rep.entries.push_back({std::move(name), worst, tol, pass, std::move(note)});
        rep.pass = rep.pass && pass;
    };

    double w1 = 0.0, w2 = -1e300, w4 = -1e300, w6a = -1e300, w6u = -1e300, w6l = -1e300, wl5 = -1e300;
    for (int i = 0; i < budget; ++i) {
        Vec y = point(i, 0, 0.0, 1.0);
        double r = -2.0 + 4.0 * detail::halton(i, 2);
        Vec p = point(i, 3, -pBox, pBox);
        Vec z{std::floor(7 * detail::halton(i, 5)) - 3, n == 2 ? std::floor(7 * detail::halton(i, 6)) - 3 : 0.0};
        double s = std::floor(7 * detail::halton(i, 7)) - 3;
        double h = m.H(y, r, p);
        w1 = std::max(w1, std::abs(m.H(y + z, r + s, p) - h));

        double r2 = -2.0 + 4.0 * detail::halton(i, 8);
        w2 = std::max(w2, std::abs(h - m.H(y, r2, p)) - m.K() * std::abs(r - r2));

        Vec p2 = point(i, 9, -pBox, pBox);
        w4 = std::max(w4, m.H(y, r, 0.5 * (p + p2)) - 0.5 * (h + m.H(y, r, p2)));

        w6a = std::max(w6a, std::abs(h - m.H({0, 0}, 0.0, p)) - m.alpha0());
        double h0 = m.H({0, 0}, 0.0, p);
        double pn = norm(p);
        w6u = std::max(w6u, h0 - m.beta0() * (std::pow(pn, m.q2()) + 1.0));
        w6l = std::max(w6l, std::pow(pn, m.q1()) / m.beta0() - m.beta0() - h0);
        wl5 = std::max(wl5, std::abs(m.L(y, r, p) - m.L({0, 0}, 0.0, p)) - m.alpha0());
    }
    add("H1 periodicity in (y,r)", w1, w1 <= tol);
    add("H2 Lipschitz in r", w2, w2 <= tol, "K = " + std::to_string(m.K()));

    // Superlinearity: the worst ratio H/|p| must keep growing along rays.
    double prev = -1e300;
    bool grows = true;
    std::string ratios;
    for (double rad : {10.0, 100.0, 1000.0}) {
        double worst = 1e300;
        for (int i = 0; i < std::min(budget, 400); ++i) {
            Vec y = point(i, 0, 0.0, 1.0);
            double r = detail::halton(i, 2);
            double ang = kTwoPi * detail::halton(i, 4);
            Vec p = n == 1 ? Vec{(i % 2 ? rad : -rad), 0.0} : Vec{rad * std::cos(ang), rad * std::sin(ang)};
            worst = std::min(worst, m.H(y, r, p) / rad);
        }
        grows = grows && worst > prev;
        prev = worst;
        ratios += (ratios.empty() ? "" : ", ") + std::to_string(worst);
    }
    add("H3 superlinearity", grows ? 0.0 : 1.0, grows, "min H/|p| at |p|=10,100,1000: " + ratios);
    add("H4 midpoint convexity", w4, w4 <= tol);
    add("H6 alpha0 bound", w6a, w6a <= tol, "alpha0 = " + std::to_string(m.alpha0()));
    add("H6 beta0 upper growth", w6u, w6u <= tol, "beta0 = " + std::to_string(m.beta0()));
    add("H6 beta0 lower growth", w6l, w6l <= tol);
    add("L5 alpha0 bound on L", wl5, wl5 <= tol);

    auto view = LagrangianView::analytic(std::shared_ptr<const HamiltonianModel>(&m, [](const HamiltonianModel*) {}));
    std::string kA;
    bool finite = true;
    for (double A : {1.0, 2.0, 4.0}) {
        double k = superlinearity_constant(view, A, 64.0);
        finite = finite && std::isfinite(k);
        kA += (kA.empty() ? "" : ", ") + std::to_string(k);
    }
    add("L3 superlinearity K(A), A=1,2,4", finite ? 0.0 : 1.0, finite, kA);

    if (m.family() == Family::Dislocation) {
        const auto& prm = m.params();
        double cmin = prm.at("c0") - std::abs(prm.at("c1")) - std::abs(prm.at("c2"));
        double deficit = 0.5 - cmin;
        add("dislocation convex-coercive structure (min c > 1/2)", deficit, deficit < 0.0,
            "min c = " + std::to_string(cmin));
    }
    return rep;
}

}  // namespace hjh
