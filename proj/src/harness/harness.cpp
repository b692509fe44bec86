#include "ergokit/harness.hpp"

#include <chrono>
#include <cstdlib>
#include <set>
#include <thread>

#include "ergokit/io.hpp"
#include "harness_impl.hpp"

namespace ergokit::harness {

namespace {

const detail::ExperimentEntry& find_experiment(const std::string& name) {
    for (const auto& e : detail::registry())
        if (e.info.name == name) return e;
    throw validation_error("unknown experiment '" + name + "' (see `ergokit list`)");
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

namespace detail {

double param_num(const ExperimentConfig& cfg, const char* key, double fallback) {
    if (!cfg.parameters.contains(key)) return fallback;
    const auto& v = cfg.parameters.at(key);
    if (!v.is_number()) throw validation_error(std::string("parameter '") + key + "' must be numeric");
    return v.get<double>();
}

long param_int(const ExperimentConfig& cfg, const char* key, long fallback) {
    if (!cfg.parameters.contains(key)) return fallback;
    const auto& v = cfg.parameters.at(key);
    if (!v.is_number_integer()) throw validation_error(std::string("parameter '") + key + "' must be an integer");
    return v.get<long>();
}

std::string param_str(const ExperimentConfig& cfg, const char* key, const std::string& fallback) {
    if (!cfg.parameters.contains(key)) return fallback;
    const auto& v = cfg.parameters.at(key);
    if (!v.is_string()) throw validation_error(std::string("parameter '") + key + "' must be a string");
    return v.get<std::string>();
}

} // namespace detail

ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw validation_error("config must be a JSON object");
    static const std::set<std::string> allowed_top = {"schema_version", "experiment", "seed",
                                                      "parameters", "output_dir"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed_top.count(it.key()))
            throw validation_error("unknown config key '" + it.key() + "'");

    ExperimentConfig cfg;
    if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer())
        throw validation_error("config requires integer 'schema_version'");
    cfg.schema_version = j.at("schema_version").get<int>();
    if (cfg.schema_version != 1)
        throw validation_error("unsupported schema_version " + std::to_string(cfg.schema_version));

    if (!j.contains("experiment") || !j.at("experiment").is_string())
        throw validation_error("config requires string 'experiment'");
    cfg.experiment = j.at("experiment").get<std::string>();

    if (!j.contains("seed") || !j.at("seed").is_number_integer())
        throw validation_error("config requires integer 'seed' (deterministic runs only)");
    cfg.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("parameters")) {
        if (!j.at("parameters").is_object())
            throw validation_error("'parameters' must be an object");
        cfg.parameters = j.at("parameters");
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string())
            throw validation_error("'output_dir' must be a string");
        cfg.output_dir = j.at("output_dir").get<std::string>();
    }

    const auto& entry = find_experiment(cfg.experiment);
    std::set<std::string> allowed(entry.info.parameter_keys.begin(),
                                  entry.info.parameter_keys.end());
    for (auto it = cfg.parameters.begin(); it != cfg.parameters.end(); ++it)
        if (!allowed.count(it.key()))
            throw validation_error("unknown parameter '" + it.key() + "' for experiment '" +
                                   cfg.experiment + "'");
    return cfg;
}

const std::vector<ExperimentInfo>& list_experiments() {
    static const std::vector<ExperimentInfo> infos = [] {
        std::vector<ExperimentInfo> v;
        for (const auto& e : detail::registry()) v.push_back(e.info);
        return v;
    }();
    return infos;
}

std::string config_hash_hex(const ExperimentConfig& cfg) {
    nlohmann::json canonical;
    canonical["schema_version"] = cfg.schema_version;
    canonical["experiment"] = cfg.experiment;
    canonical["seed"] = cfg.seed;
    canonical["parameters"] = cfg.parameters;
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical.dump())));
    return buf;
}

int thread_budget() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("ERGOKIT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v < 1024) n = static_cast<int>(v);
    }
    return n;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
    const auto& entry = find_experiment(cfg.experiment);

    RunReport report;
    report.experiment = cfg.experiment;
    report.config_hash = config_hash_hex(cfg);

    const auto t0 = std::chrono::steady_clock::now();
    entry.run(cfg, report);
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::set<std::string> names;
    for (const auto& c : report.checks)
        if (!names.insert(c.name).second)
            throw numerical_error("run_experiment: duplicate check name '" + c.name + "'");

    nlohmann::json jr;
    jr["experiment"] = report.experiment;
    jr["config_hash"] = report.config_hash;
    jr["wall_time_s"] = report.wall_time_s;
    jr["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["pass"] = c.pass;
        jc["measured"] = c.measured;
        jc["reference"] = c.reference;
        jc["detail"] = c.detail;
        jr["checks"].push_back(jc);
    }
    jr["artifacts"] = report.artifacts;
    io::write_json_file(cfg.output_dir / "report.json", jr);
    return report;
}

} // namespace ergokit::harness
