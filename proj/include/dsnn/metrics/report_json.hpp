#pragma once

#include <string>
#include <vector>

#include "dsnn/metrics/fidelity.hpp"
#include "dsnn/metrics/memory_cost.hpp"

namespace dsnn {

/// Pretty-printed JSON documents (keys sorted, two-space indent).
std::string to_json(const FidelityReport &r);
std::string to_json(const std::vector<CostReport> &r);
std::string to_json(const std::vector<PresetReport> &r);

} // namespace dsnn
