#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hjhomog/experiment.hpp"

using namespace hjh;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"({
  "experiment": "fundamental",
  "model": {"name": "quadratic-free", "dim": 1},
  "output": {"name": "small"},
  "seed": 3,
  "fundamental": {"base": [0.0], "c": 0.0, "T": 0.5,
                  "grid": {"ppu": 64, "dt": 0.015625, "radius": 1.0},
                  "closed_form_tol": 0.05}
})";

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

ErrorCode parse_error(const std::string& text, std::string* msg = nullptr) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        if (msg) *msg = e.what();
        return e.code();
    }
    ADD_FAILURE() << "config parsed";
    return ErrorCode::InvalidArgument;
}

std::string with(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    return text.replace(at, from.size(), to);
}

class OutputRoot : public ::testing::Test {
protected:
    void SetUp() override {
        root_ = fs::temp_directory_path() /
                ("hjhomog-test-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(root_);
        setenv("HJHOMOG_OUTPUT_ROOT", root_.c_str(), 1);
    }
    void TearDown() override {
        unsetenv("HJHOMOG_OUTPUT_ROOT");
        fs::remove_all(root_);
    }
    fs::path root_;
};

}  // namespace

TEST(Config, ParsesAndBuildsTheModel) {
    const ExperimentConfig c = parse_config(kSmall);
    EXPECT_EQ(c.kind, ExperimentKind::Fundamental);
    EXPECT_EQ(c.modelName, "quadratic-free");
    EXPECT_EQ(c.seed, 3u);
    EXPECT_EQ(c.fundamental.grid.ppu, 64);
    EXPECT_DOUBLE_EQ(c.fundamental.T, 0.5);
}

TEST(Config, UnknownKeyNamesItsPath) {
    std::string msg;
    EXPECT_EQ(parse_error(with(kSmall, "\"ppu\"", "\"ppuu\""), &msg), ErrorCode::Config);
    EXPECT_NE(msg.find("fundamental.grid.ppuu: unknown key"), std::string::npos) << msg;
    EXPECT_EQ(parse_error(with(kSmall, "\"seed\"", "\"sead\"")), ErrorCode::Config);
}

TEST(Config, TypeAndValueErrors) {
    std::string msg;
    EXPECT_EQ(parse_error(with(kSmall, "\"T\": 0.5", "\"T\": \"half\""), &msg), ErrorCode::Config);
    EXPECT_NE(msg.find("fundamental.T"), std::string::npos) << msg;
    EXPECT_EQ(parse_error(with(kSmall, "\"base\": [0.0]", "\"base\": [0.0, 1.0]")), ErrorCode::Config);
    EXPECT_EQ(parse_error(with(kSmall, "\"quadratic-free\"", "\"no-such-model\"")), ErrorCode::Config);
    EXPECT_EQ(parse_error(with(kSmall, "\"fundamental\",", "\"nonsense\",")), ErrorCode::Config);
    EXPECT_EQ(parse_error("{ not json"), ErrorCode::Config);
    EXPECT_EQ(parse_error(with(kSmall, "\"small\"", "\"../escape\"")), ErrorCode::Config);
}

TEST(Config, ForeignSectionIsRejected) {
    std::string msg;
    const std::string text = with(kSmall, "\"seed\": 3,", "\"seed\": 3, \"cauchy\": {},");
    EXPECT_EQ(parse_error(text, &msg), ErrorCode::Config);
    EXPECT_NE(msg.find("does not apply"), std::string::npos) << msg;
}

TEST(Config, HashIgnoresLayoutButNotValues) {
    const ExperimentConfig a = parse_config(kSmall);
    nlohmann::json j = nlohmann::json::parse(kSmall);
    const ExperimentConfig b = parse_config(j.dump());
    const ExperimentConfig c = parse_config(with(kSmall, "\"c\": 0.0", "\"c\": 0.25"));
    EXPECT_EQ(a.hash, b.hash);
    EXPECT_EQ(a.canonical, b.canonical);
    EXPECT_NE(a.hash, c.hash);
    EXPECT_EQ(fnv1a(""), 14695981039346656037ull);
}

TEST_F(OutputRoot, EnvironmentOverridesTheRoot) {
    const ExperimentConfig c = parse_config(kSmall);
    EXPECT_EQ(fs::path(output_dir(c)), root_ / "small");
    const ExperimentConfig anon = parse_config(with(kSmall, "\"output\": {\"name\": \"small\"},", ""));
    EXPECT_EQ(fs::path(output_dir(anon)).filename().string().rfind("fundamental-", 0), 0u);
}

TEST_F(OutputRoot, RunWritesManifestAndIsReproducible) {
    const RunOutcome first = run_experiment(parse_config(kSmall));
    ASSERT_TRUE(first.pass()) << first.first_failure();
    const fs::path dir = first.outputDir;
    for (const char* f : {"manifest.json", "summary.json", "m_final.csv", "herglotz.csv"})
        EXPECT_TRUE(fs::exists(dir / f)) << f;

    const nlohmann::json m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(m["status"], "passed");
    EXPECT_EQ(m["experiment"], "fundamental");
    EXPECT_EQ(m["seed"], 3);
    EXPECT_FALSE(m["files"].empty());

    const std::string csv = slurp(dir / "m_final.csv");
    const std::string curves = slurp(dir / "herglotz.csv");
    const RunOutcome second = run_experiment(parse_config(with(kSmall, "\"small\"", "\"small-again\"")));
    EXPECT_EQ(slurp(fs::path(second.outputDir) / "m_final.csv"), csv);
    EXPECT_EQ(slurp(fs::path(second.outputDir) / "herglotz.csv"), curves);
}

TEST_F(OutputRoot, NumericFailureLeavesAnErrorManifest) {
    const std::string text = with(kSmall, "\"radius\": 1.0", "\"radius\": 1.0, \"vmax\": 0.25");
    try {
        run_experiment(parse_config(text));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Numeric);
    }
    const nlohmann::json m = nlohmann::json::parse(slurp(root_ / "small" / "manifest.json"));
    EXPECT_EQ(m["status"], "error");
}

TEST_F(OutputRoot, VerifyChecksWithoutWriting) {
    const RunOutcome v = verify_experiment(parse_config(kSmall));
    EXPECT_TRUE(v.pass()) << v.first_failure();
    EXPECT_FALSE(fs::exists(root_ / "small"));
}

TEST(Config, IrrationalCorrectorSlopeIsUnsupported) {
    const ExperimentConfig c = parse_config(R"({
      "experiment": "corrector",
      "model": {"name": "quadratic-free"},
      "corrector": {"p": [0.7071067811865476], "tau_max": 4.0}
    })");
    try {
        verify_experiment(c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Unsupported);
    }
}
