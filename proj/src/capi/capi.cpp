#include "hjhomog.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hjhomog/experiment.hpp"
#include "hjhomog/model.hpp"
#include "hjhomog/regularity.hpp"
#include "hjhomog/transport1d.hpp"

struct hjh_model {
    hjh::ModelPtr model;
};

struct hjh_run {
    hjh::ExperimentConfig config;
    hjh::RunOutcome outcome;
    bool executed = false;
};

namespace {

thread_local std::string g_error;

hjh_status map_code(hjh::ErrorCode c) {
    switch (c) {
        case hjh::ErrorCode::InvalidArgument: return HJH_ERR_INVALID_ARGUMENT;
        case hjh::ErrorCode::Config: return HJH_ERR_CONFIG;
        case hjh::ErrorCode::Domain: return HJH_ERR_DOMAIN;
        case hjh::ErrorCode::Numeric: return HJH_ERR_NUMERIC;
        case hjh::ErrorCode::Unsupported: return HJH_ERR_UNSUPPORTED;
    }
    return HJH_ERR_INTERNAL;
}

template <class F>
hjh_status guarded(F&& body) {
    g_error.clear();
    try {
        body();
        return HJH_OK;
    } catch (const hjh::Error& e) {
        g_error = e.what();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        g_error = "out of memory";
        return HJH_ERR_NUMERIC;
    } catch (const std::exception& e) {
        g_error = e.what();
        return HJH_ERR_INTERNAL;
    } catch (...) {
        g_error = "unknown failure";
        return HJH_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (!p) hjh::fail(hjh::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

hjh::Vec vec_of(const double* x, int dim) {
    hjh::Vec v{0.0, 0.0};
    for (int d = 0; d < dim; ++d) v[d] = x[d];
    return v;
}

}  // namespace

extern "C" {

const char* hjh_version(void) { return HJHOMOG_VERSION; }

const char* hjh_status_name(hjh_status status) {
    switch (status) {
        case HJH_OK: return "ok";
        case HJH_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case HJH_ERR_CONFIG: return "config";
        case HJH_ERR_DOMAIN: return "domain";
        case HJH_ERR_NUMERIC: return "numeric";
        case HJH_ERR_UNSUPPORTED: return "unsupported";
        case HJH_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* hjh_last_error(void) { return g_error.c_str(); }

void hjh_string_free(char* s) { std::free(s); }

hjh_status hjh_list_models(char** out) {
    return guarded([&] {
        need(out, "out");
        std::string s;
        for (const auto& n : hjh::list_models()) s += n + "\n";
        *out = dup(s);
    });
}

hjh_status hjh_describe_model(const char* name, char** out) {
    return guarded([&] {
        need(name, "name");
        need(out, "out");
        *out = dup(hjh::describe_model(name));
    });
}

hjh_status hjh_model_create(const char* name, const char* params_json, int dim, hjh_model** out) {
    return guarded([&] {
        need(name, "name");
        need(out, "out");
        *out = nullptr;
        hjh::ParamMap params;
        if (params_json && *params_json) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(params_json);
            } catch (const nlohmann::json::parse_error& e) {
                hjh::fail(hjh::ErrorCode::Config, std::string("params: not valid JSON (") + e.what() + ")");
            }
            if (!j.is_object()) hjh::fail(hjh::ErrorCode::Config, "params: expected an object of numbers");
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!it.value().is_number())
                    hjh::fail(hjh::ErrorCode::Config, "params." + it.key() + ": expected a number");
                params[it.key()] = it.value().get<double>();
            }
        }
        *out = new hjh_model{hjh::make_model(name, params, dim)};
    });
}

void hjh_model_destroy(hjh_model* model) { delete model; }

int hjh_model_dim(const hjh_model* model) { return model ? model->model->dim() : 0; }

hjh_status hjh_model_hamiltonian(const hjh_model* model, const double* y, double r, const double* p, double* out) {
    return guarded([&] {
        need(model, "model");
        need(y, "y");
        need(p, "p");
        need(out, "out");
        const int d = model->model->dim();
        *out = model->model->H(vec_of(y, d), r, vec_of(p, d));
    });
}

hjh_status hjh_model_lagrangian(const hjh_model* model, const double* y, double r, const double* v, double* out) {
    return guarded([&] {
        need(model, "model");
        need(y, "y");
        need(v, "v");
        need(out, "out");
        const int d = model->model->dim();
        *out = model->model->L(vec_of(y, d), r, vec_of(v, d));
    });
}

hjh_status hjh_model_constants(const hjh_model* model, double* K, double* q1, double* q2) {
    return guarded([&] {
        need(model, "model");
        if (K) *K = model->model->K();
        if (q1) *q1 = model->model->q1();
        if (q2) *q2 = model->model->q2();
    });
}

hjh_status hjh_model_verify(const hjh_model* model, int samples, double tol, int* pass, char** report_json) {
    return guarded([&] {
        need(model, "model");
        need(pass, "pass");
        const hjh::AssumptionReport r = hjh::verify_assumptions(*model->model, samples, tol);
        *pass = r.pass ? 1 : 0;
        if (report_json) *report_json = dup(r.to_json());
    });
}

hjh_status hjh_holder_exponents(double q1, double q2, double* x_exponent, double* t_exponent) {
    return guarded([&] {
        need(x_exponent, "x_exponent");
        need(t_exponent, "t_exponent");
        const hjh::HolderSpec s = hjh::holder_spec(q1, q2);
        *x_exponent = s.xExponent;
        *t_exponent = s.tExponent;
    });
}

hjh_status hjh_effective_speed(double offset, double a, double b, double c, int k, double* xi) {
    return guarded([&] {
        need(xi, "xi");
        *xi = hjh::effective_speed(hjh::VelocityField{offset, a, b, c, k}).xi;
    });
}

hjh_status hjh_run_load(const char* config_path, hjh_run** out) {
    return guarded([&] {
        need(config_path, "config_path");
        need(out, "out");
        *out = nullptr;
        auto* r = new hjh_run;
        try {
            r->config = hjh::load_config(config_path);
        } catch (...) {
            delete r;
            throw;
        }
        *out = r;
    });
}

hjh_status hjh_run_parse(const char* config_json, hjh_run** out) {
    return guarded([&] {
        need(config_json, "config_json");
        need(out, "out");
        *out = nullptr;
        auto* r = new hjh_run;
        try {
            r->config = hjh::parse_config(config_json);
        } catch (...) {
            delete r;
            throw;
        }
        *out = r;
    });
}

void hjh_run_destroy(hjh_run* run) { delete run; }

hjh_status hjh_run_kind(const hjh_run* run, char** out) {
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        *out = dup(hjh::experiment_name(run->config.kind));
    });
}

hjh_status hjh_run_execute(hjh_run* run, int* pass) {
    return guarded([&] {
        need(run, "run");
        need(pass, "pass");
        run->outcome = hjh::run_experiment(run->config);
        run->executed = true;
        *pass = run->outcome.pass() ? 1 : 0;
    });
}

hjh_status hjh_run_verify(hjh_run* run, int* pass) {
    return guarded([&] {
        need(run, "run");
        need(pass, "pass");
        run->outcome = hjh::verify_experiment(run->config);
        run->executed = true;
        *pass = run->outcome.pass() ? 1 : 0;
    });
}

hjh_status hjh_run_summary(const hjh_run* run, char** json) {
    return guarded([&] {
        need(run, "run");
        need(json, "json");
        if (!run->executed) hjh::fail(hjh::ErrorCode::InvalidArgument, "run has not been executed");
        *json = dup(run->outcome.summary);
    });
}

hjh_status hjh_run_output_dir(const hjh_run* run, char** out) {
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        *out = dup(hjh::output_dir(run->config));
    });
}

hjh_status hjh_run_assertions(const hjh_run* run, char** out) {
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        std::ostringstream os;
        for (const auto& a : run->outcome.assertions)
            os << (a.pass ? "PASS" : "FAIL") << '\t' << a.name << '\t' << a.detail << '\n';
        *out = dup(os.str());
    });
}

hjh_status hjh_run_first_failure(const hjh_run* run, char** out) {
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        *out = dup(run->outcome.first_failure());
    });
}

}  // extern "C"
