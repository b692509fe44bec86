#pragma once

#include <functional>

#include "ergokit/harness.hpp"

namespace ergokit::harness::detail {

struct ExperimentEntry {
    ExperimentInfo info;
    std::function<void(const ExperimentConfig&, RunReport&)> run;
};

const std::vector<ExperimentEntry>& registry();

// Parameter lookup with default; the key must be in the experiment's allowed set.
double param_num(const ExperimentConfig& cfg, const char* key, double fallback);
long param_int(const ExperimentConfig& cfg, const char* key, long fallback);
std::string param_str(const ExperimentConfig& cfg, const char* key, const std::string& fallback);

} // namespace ergokit::harness::detail
