#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "hjhomog.h"

extern "C" {
int capi_list_has(const char* name);
int capi_describe_unknown(void);
double capi_quadratic_free_h(double p);
double capi_sine_gordon_k(double amplitude);
int capi_verify(const char* name);
hjh_status capi_bad_params(void);
int capi_holder(double q1, double q2, double* x, double* t);
int capi_speed(double offset, double a, double* xi);
hjh_status capi_null_out(void);
int capi_run_roundtrip(const char* json, int* pass, char* kind, size_t kindLen);
}

TEST(CApi, VersionAndStatusNames) {
    EXPECT_EQ(std::string(hjh_version()), HJHOMOG_EXPECTED_VERSION);
    EXPECT_STREQ(hjh_status_name(HJH_ERR_CONFIG), "config");
    EXPECT_STREQ(hjh_status_name(HJH_OK), "ok");
}

TEST(CApi, ModelCatalogue) {
    for (const char* name : {"quadratic-free", "sine-gordon", "dislocation", "transport-derived"})
        EXPECT_TRUE(capi_list_has(name)) << name;
    EXPECT_TRUE(capi_describe_unknown());
}

TEST(CApi, ModelEvaluation) {
    EXPECT_DOUBLE_EQ(capi_quadratic_free_h(0.8), 0.32);
    EXPECT_NEAR(capi_sine_gordon_k(1.0), 1.05 * 2.0 * M_PI, 1e-6);
    EXPECT_EQ(capi_verify("sine-gordon"), 1);
    EXPECT_EQ(capi_bad_params(), HJH_ERR_CONFIG);
    EXPECT_EQ(capi_null_out(), HJH_ERR_INVALID_ARGUMENT);
}

TEST(CApi, ClosedFormHelpers) {
    double x = 0, t = 0, xi = 0;
    ASSERT_EQ(capi_holder(2.0, 3.0, &x, &t), HJH_OK);
    EXPECT_DOUBLE_EQ(x, 3.0 / 5.0);
    EXPECT_DOUBLE_EQ(t, 3.0 / 7.0);
    EXPECT_EQ(capi_holder(3.0, 2.0, &x, &t), HJH_ERR_CONFIG);
    ASSERT_EQ(capi_speed(2.0, 1.0, &xi), HJH_OK);
    EXPECT_NEAR(xi, std::sqrt(3.0), 1e-9);
}

TEST(CApi, RunHandles) {
    int pass = 0;
    char kind[32] = {0};
    const char* ok = R"({"experiment": "verify-model", "model": {"name": "sine-gordon"}})";
    ASSERT_EQ(capi_run_roundtrip(ok, &pass, kind, sizeof kind), HJH_OK) << hjh_last_error();
    EXPECT_EQ(pass, 1);
    EXPECT_STREQ(kind, "verify-model");
    const char* bad = R"({"experiment": "verify-model", "model": {"name": "sine-gordon"}, "extra": 1})";
    EXPECT_EQ(capi_run_roundtrip(bad, &pass, kind, sizeof kind), HJH_ERR_CONFIG);
    EXPECT_NE(std::string(hjh_last_error()).find("extra"), std::string::npos);
}
