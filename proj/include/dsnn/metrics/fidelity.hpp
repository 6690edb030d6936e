#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dsnn/core/trace.hpp"

namespace dsnn {

struct FidelityReport
{
    std::size_t samples = 0;
    /// Percent correct per executor; empty when no labels were given.
    std::optional<double> reference_accuracy;
    std::optional<double> test_accuracy;
    /// Percent of samples with identical predictions, in [0, 100].
    double consistency = 100.0;
    /// Average spike count per inference, per computed layer.
    std::vector<double> reference_spikes;
    std::vector<double> test_spikes;
    /// Root-mean-square membrane potential difference per computed layer.
    std::vector<double> vmem_rmse;
    /// confusion[true][predicted]; filled when labels are given.
    std::vector<std::vector<std::size_t>> reference_confusion;
    std::vector<std::vector<std::size_t>> test_confusion;
};

/// Compares two executors over the same dataset (same order). `labels` may be
/// empty; otherwise it needs one entry per trace.
FidelityReport compare_traces(const std::vector<SimTrace> &reference,
        const std::vector<SimTrace> &test, const std::vector<int> &labels = {});

} // namespace dsnn
