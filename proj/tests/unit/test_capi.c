/* Exercised from C so the public header is checked as plain C. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "hjhomog.h"

int capi_list_has(const char* name) {
    char* s = NULL;
    if (hjh_list_models(&s) != HJH_OK) return 0;
    const int found = strstr(s, name) != NULL;
    hjh_string_free(s);
    return found;
}

int capi_describe_unknown(void) {
    char* s = NULL;
    const hjh_status st = hjh_describe_model("no-such-model", &s);
    if (st != HJH_ERR_CONFIG || s != NULL) return 0;
    return strstr(hjh_last_error(), "no-such-model") != NULL;
}

double capi_quadratic_free_h(double p) {
    hjh_model* m = NULL;
    if (hjh_model_create("quadratic-free", NULL, 1, &m) != HJH_OK) return NAN;
    const double y[2] = {0.3, 0.0};
    const double pv[2] = {p, 0.0};
    double h = NAN;
    if (hjh_model_hamiltonian(m, y, 0.7, pv, &h) != HJH_OK) h = NAN;
    hjh_model_destroy(m);
    return h;
}

double capi_sine_gordon_k(double amplitude) {
    char params[64];
    hjh_model* m = NULL;
    double K = NAN, q1 = NAN, q2 = NAN;
    snprintf(params, sizeof params, "{\"amplitude\": %.17g}", amplitude);
    if (hjh_model_create("sine-gordon", params, 1, &m) != HJH_OK) return NAN;
    if (hjh_model_constants(m, &K, &q1, &q2) != HJH_OK || q1 != 2.0 || q2 != 2.0) K = NAN;
    hjh_model_destroy(m);
    return K;
}

int capi_verify(const char* name) {
    hjh_model* m = NULL;
    int pass = 0;
    char* report = NULL;
    if (hjh_model_create(name, "{}", 1, &m) != HJH_OK) return -1;
    if (hjh_model_verify(m, 500, 1e-9, &pass, &report) != HJH_OK) pass = -1;
    if (report == NULL || report[0] != '{') pass = -1;
    hjh_string_free(report);
    hjh_model_destroy(m);
    return pass;
}

hjh_status capi_bad_params(void) {
    hjh_model* m = NULL;
    return hjh_model_create("sine-gordon", "{ amplitude", 1, &m);
}

int capi_holder(double q1, double q2, double* x, double* t) { return hjh_holder_exponents(q1, q2, x, t); }

int capi_speed(double offset, double a, double* xi) { return hjh_effective_speed(offset, a, 0.0, 0.0, 1, xi); }

hjh_status capi_null_out(void) { return hjh_list_models(NULL); }

int capi_run_roundtrip(const char* json, int* pass, char* kind, size_t kindLen) {
    hjh_run* run = NULL;
    char* k = NULL;
    char* lines = NULL;
    hjh_status st = hjh_run_parse(json, &run);
    if (st != HJH_OK) return st;
    st = hjh_run_kind(run, &k);
    if (st == HJH_OK) {
        strncpy(kind, k, kindLen - 1);
        kind[kindLen - 1] = '\0';
        hjh_string_free(k);
        st = hjh_run_verify(run, pass);
    }
    if (st == HJH_OK) st = hjh_run_assertions(run, &lines);
    if (st == HJH_OK && strncmp(lines, "PASS\t", 5) != 0 && strncmp(lines, "FAIL\t", 5) != 0) st = HJH_ERR_INTERNAL;
    hjh_string_free(lines);
    hjh_run_destroy(run);
    return st;
}
