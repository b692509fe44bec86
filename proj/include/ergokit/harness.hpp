#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergokit/errors.hpp"

// Experiment registry, configuration, deterministic seeding and result emission.
namespace ergokit::harness {

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 0;
    nlohmann::json parameters = nlohmann::json::object();
    std::filesystem::path output_dir = "out";
    int schema_version = 1;
};

// Strict parse: unknown keys (top-level or per-experiment parameters) are
// rejected, the schema version must match, the seed is mandatory.
ExperimentConfig parse_config(const nlohmann::json& j);

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double reference = 0.0; // bound or target the measured value is judged against
    std::string detail;
};

struct RunReport {
    std::string experiment;
    std::string config_hash; // FNV-1a 64 of the canonical config, hex
    double wall_time_s = 0.0;
    std::vector<CheckResult> checks;
    std::vector<std::string> artifacts;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct ExperimentInfo {
    std::string name;
    std::string description;
    std::vector<std::string> parameter_keys; // accepted parameter names
};

// Stable registry ordering.
const std::vector<ExperimentInfo>& list_experiments();

// Runs the named experiment, writes artifacts plus report.json under
// cfg.output_dir, and returns the report. Checks are unique by name.
RunReport run_experiment(const ExperimentConfig& cfg);

// ERGOKIT_THREADS cap (>= 1), defaulting to the hardware concurrency.
int thread_budget();

std::string config_hash_hex(const ExperimentConfig& cfg);

} // namespace ergokit::harness
