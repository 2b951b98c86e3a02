#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "hjhomog.h"

namespace {

enum Exit { kPass = 0, kAssertion = 1, kSchema = 2, kNumeric = 3 };

int exit_for(hjh_status s) {
    switch (s) {
        case HJH_OK: return kPass;
        case HJH_ERR_CONFIG:
        case HJH_ERR_INVALID_ARGUMENT:
        case HJH_ERR_UNSUPPORTED: return kSchema;
        default: return kNumeric;
    }
}

int report_error(hjh_status s) {
    std::fprintf(stderr, "hjhomog: %s error: %s\n", hjh_status_name(s), hjh_last_error());
    return exit_for(s);
}

std::string take(char* s) {
    std::string out = s ? s : "";
    hjh_string_free(s);
    return out;
}

int run_config(const std::string& path, bool verifyOnly, bool printSummary) {
    hjh_run* run = nullptr;
    hjh_status st = hjh_run_load(path.c_str(), &run);
    if (st != HJH_OK) return report_error(st);

    int pass = 0;
    st = verifyOnly ? hjh_run_verify(run, &pass) : hjh_run_execute(run, &pass);
    if (st != HJH_OK) {
        const int code = report_error(st);
        hjh_run_destroy(run);
        return code;
    }
    char* text = nullptr;
    hjh_run_assertions(run, &text);
    std::fputs(take(text).c_str(), stdout);
    if (printSummary && hjh_run_summary(run, &text) == HJH_OK) std::printf("%s\n", take(text).c_str());
    if (hjh_run_output_dir(run, &text) == HJH_OK)
        std::printf("%s %s\n", verifyOnly ? "output (not written):" : "output:", take(text).c_str());
    if (!pass && hjh_run_first_failure(run, &text) == HJH_OK)
        std::fprintf(stderr, "hjhomog: assertion failed: %s\n", take(text).c_str());
    hjh_run_destroy(run);
    return pass ? kPass : kAssertion;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homogenization experiments for contact Hamilton-Jacobi equations"};
    app.set_version_flag("--version", std::string(hjh_version()));
    app.require_subcommand(1);

    std::string config;
    bool summary = false;
    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("config", config, "Experiment config (JSON)")->required();
    run->add_flag("--summary", summary, "Print the JSON summary after the assertions");

    auto* verify = app.add_subcommand("verify", "Validate a config and the model assumptions without computing");
    verify->add_option("config", config, "Experiment config (JSON)")->required();
    verify->add_flag("--summary", summary, "Print the JSON summary after the assertions");

    auto* list = app.add_subcommand("list-models", "Print the model names, one per line");

    std::string model;
    auto* describe = app.add_subcommand("describe", "Print the formula, parameters and constraints of a model");
    describe->add_option("model", model, "Model name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kSchema;
    }

    if (*run) return run_config(config, false, summary);
    if (*verify) return run_config(config, true, summary);
    char* text = nullptr;
    if (*list) {
        const hjh_status st = hjh_list_models(&text);
        if (st != HJH_OK) return report_error(st);
        std::fputs(take(text).c_str(), stdout);
        return kPass;
    }
    if (*describe) {
        const hjh_status st = hjh_describe_model(model.c_str(), &text);
        if (st != HJH_OK) return report_error(st);
        std::printf("%s\n", take(text).c_str());
        return kPass;
    }
    return kSchema;
}
