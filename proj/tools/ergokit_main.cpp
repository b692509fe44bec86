#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "ergokit/harness.hpp"
#include "ergokit/io.hpp"

namespace {

int cmd_list() {
    for (const auto& e : ergokit::harness::list_experiments())
        std::printf("%-20s %s\n", e.name.c_str(), e.description.c_str());
    return 0;
}

ergokit::harness::ExperimentConfig load_config(const std::string& path, bool has_seed,
                                               std::uint64_t seed, const std::string& out) {
    nlohmann::json j = ergokit::io::read_json_file(path);
    if (has_seed) j["seed"] = seed;
    auto cfg = ergokit::harness::parse_config(j);
    if (!out.empty()) cfg.output_dir = out;
    return cfg;
}

int cmd_run(const std::string& path, bool has_seed, std::uint64_t seed, const std::string& out) {
    const auto cfg = load_config(path, has_seed, seed, out);
    const auto report = ergokit::harness::run_experiment(cfg);
    for (const auto& c : report.checks)
        std::printf("[%s] %-40s measured=%.10g reference=%.10g\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.measured, c.reference);
    std::printf("%s: %zu checks, report at %s/report.json\n", report.experiment.c_str(),
                report.checks.size(), cfg.output_dir.string().c_str());
    return report.all_pass() ? 0 : 1;
}

int cmd_validate(const std::string& path) {
    const auto cfg = load_config(path, false, 0, "");
    std::printf("ok: experiment '%s', seed %llu, hash %s\n", cfg.experiment.c_str(),
                static_cast<unsigned long long>(cfg.seed),
                ergokit::harness::config_hash_hex(cfg).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ergokit - ergodic-theorem numerical laboratory"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "List available experiments");

    std::string run_config, run_out;
    std::uint64_t run_seed = 0;
    auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
    run->add_option("--config", run_config, "Config file (JSON)")->required();
    auto* seed_opt = run->add_option("--seed", run_seed, "Override the config seed");
    run->add_option("--out", run_out, "Output directory override");

    std::string val_config;
    auto* validate = app.add_subcommand("validate", "Validate a config without running");
    validate->add_option("--config", val_config, "Config file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (list->parsed()) return cmd_list();
        if (run->parsed()) return cmd_run(run_config, seed_opt->count() > 0, run_seed, run_out);
        if (validate->parsed()) return cmd_validate(val_config);
    } catch (const ergokit::validation_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
