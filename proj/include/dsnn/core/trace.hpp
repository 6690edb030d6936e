#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dsnn/core/network.hpp"

namespace dsnn {

struct LayerTrace
{
    std::size_t width = 0;
    std::vector<std::uint8_t> spikes;  ///< [t][neuron]
    std::vector<double> vmem;          ///< [t][neuron]
};

/// Per-layer, per-timestep record of a forward pass over the computed
/// (non-input) layers.
struct SimTrace
{
    std::size_t timesteps = 0;
    std::vector<LayerTrace> layers;
    int prediction = -1;

    SimTrace() = default;
    SimTrace(std::size_t timesteps, std::span<const std::size_t> layer_widths);

    bool spike(std::size_t layer, std::size_t t, std::size_t n) const
    {
        return layers[layer].spikes[t * layers[layer].width + n] != 0;
    }
    double vmem(std::size_t layer, std::size_t t, std::size_t n) const
    {
        return layers[layer].vmem[t * layers[layer].width + n];
    }
    std::span<const std::uint8_t> spikes_at(std::size_t layer, std::size_t t) const
    {
        const auto w = layers[layer].width;
        return {layers[layer].spikes.data() + t * w, w};
    }

    std::size_t spike_count(std::size_t layer) const;
    /// Spike count of each output neuron over the window.
    std::vector<std::size_t> output_counts() const;
};

/// Class chosen by `kind` from the output layer of the trace.
int readout_prediction(const SimTrace &trace, ReadoutKind kind);

/// True when both traces match bit-for-bit (spikes, vmem bit patterns,
/// prediction).
bool bit_identical(const SimTrace &a, const SimTrace &b);

} // namespace dsnn
