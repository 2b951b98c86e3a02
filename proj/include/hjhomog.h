#ifndef HJHOMOG_H
#define HJHOMOG_H

/*
 * C interface of libhjhomog. Every function returns an hjh_status; on failure
 * hjh_last_error() describes the problem for the calling thread. Strings
 * returned through char** belong to the caller and are released with
 * hjh_string_free.
 */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(HJHOMOG_BUILDING_LIBRARY)
#define HJH_API __attribute__((visibility("default")))
#else
#define HJH_API
#endif

typedef enum hjh_status {
    HJH_OK = 0,
    HJH_ERR_INVALID_ARGUMENT = 1,
    HJH_ERR_CONFIG = 2,
    HJH_ERR_DOMAIN = 3,
    HJH_ERR_NUMERIC = 4,
    HJH_ERR_UNSUPPORTED = 5,
    HJH_ERR_INTERNAL = 6
} hjh_status;

typedef struct hjh_model hjh_model;
typedef struct hjh_run hjh_run;

HJH_API const char* hjh_version(void);
HJH_API const char* hjh_status_name(hjh_status status);
/* Message of the last failed call on this thread ("" when none). */
HJH_API const char* hjh_last_error(void);
HJH_API void hjh_string_free(char* s);

/* Newline-separated model names. */
HJH_API hjh_status hjh_list_models(char** out);
HJH_API hjh_status hjh_describe_model(const char* name, char** out);

/* params_json is a JSON object of numbers, or NULL for the defaults. */
HJH_API hjh_status hjh_model_create(const char* name, const char* params_json, int dim, hjh_model** out);
HJH_API void hjh_model_destroy(hjh_model* model);
HJH_API int hjh_model_dim(const hjh_model* model);
HJH_API hjh_status hjh_model_hamiltonian(const hjh_model* model, const double* y, double r, const double* p,
                                         double* out);
HJH_API hjh_status hjh_model_lagrangian(const hjh_model* model, const double* y, double r, const double* v,
                                        double* out);
HJH_API hjh_status hjh_model_constants(const hjh_model* model, double* K, double* q1, double* q2);
/* *pass is 1 when every sampled assumption holds; report_json may be NULL. */
HJH_API hjh_status hjh_model_verify(const hjh_model* model, int samples, double tol, int* pass,
                                    char** report_json);

/* Hoelder exponents in space and time for growth exponents q1 <= q2. */
HJH_API hjh_status hjh_holder_exponents(double q1, double q2, double* x_exponent, double* t_exponent);
/* Effective speed of offset + a sin(2 pi k r) + b cos(2 pi k r) + c sin^2(pi k r). */
HJH_API hjh_status hjh_effective_speed(double offset, double a, double b, double c, int k, double* xi);

HJH_API hjh_status hjh_run_load(const char* config_path, hjh_run** out);
HJH_API hjh_status hjh_run_parse(const char* config_json, hjh_run** out);
HJH_API void hjh_run_destroy(hjh_run* run);
HJH_API hjh_status hjh_run_kind(const hjh_run* run, char** out);
/* Executes the experiment; *pass is 1 when every assertion holds. */
HJH_API hjh_status hjh_run_execute(hjh_run* run, int* pass);
/* Schema and model checks without the experiment compute. */
HJH_API hjh_status hjh_run_verify(hjh_run* run, int* pass);
HJH_API hjh_status hjh_run_summary(const hjh_run* run, char** json);
HJH_API hjh_status hjh_run_output_dir(const hjh_run* run, char** out);
/* One line per assertion: "PASS|FAIL<TAB>name<TAB>detail". */
HJH_API hjh_status hjh_run_assertions(const hjh_run* run, char** out);
HJH_API hjh_status hjh_run_first_failure(const hjh_run* run, char** out);

#ifdef __cplusplus
}
#endif

#endif
