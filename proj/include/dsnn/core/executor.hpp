#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dsnn/core/error.hpp"
#include "dsnn/core/lif.hpp"
#include "dsnn/core/network.hpp"
#include "dsnn/core/raster.hpp"
#include "dsnn/core/trace.hpp"

namespace dsnn {

void check_raster_shape(const NetworkModel &model, const SpikeRaster &raster);

/// Timestep driver shared by all executors. A projection backend supplies
///
///     void step(std::size_t t, std::span<const std::uint8_t> presyn_spikes,
///               std::span<double> current);
///
/// which receives the presynaptic layer's spikes of step t and must add into
/// `current` (zero-initialised) everything deliverable to the postsynaptic
/// layer at step t. Layers are evaluated in order within a step, so
/// zero-delay events reach the next layer in the same step.
template <typename Projection>
SimTrace run_network(const NetworkModel &model, const SpikeRaster &raster,
        std::span<Projection> projections)
{
    check_raster_shape(model, raster);
    const std::size_t layers = model.num_layers();
    if (projections.size() != layers)
    {
        throw DimensionError("run_network: one projection per connection required");
    }

    std::vector<std::size_t> widths(model.widths.begin() + 1, model.widths.end());
    SimTrace trace(model.num_timesteps, widths);

    std::vector<std::vector<NeuronState>> state(layers);
    std::vector<double> decay(layers);
    for (std::size_t l = 0; l < layers; ++l)
    {
        state[l].assign(widths[l], NeuronState{});
        decay[l] = model.neurons[l].decay();
    }

    std::vector<double> current;
    for (std::size_t t = 0; t < model.num_timesteps; ++t)
    {
        for (std::size_t l = 0; l < layers; ++l)
        {
            const auto presyn = (l == 0) ? raster.step(t) : trace.spikes_at(l - 1, t);
            current.assign(widths[l], 0.0);
            projections[l].step(t, presyn, std::span<double>(current));

            LayerTrace &out = trace.layers[l];
            const double threshold = model.neurons[l].threshold;
            for (std::size_t n = 0; n < widths[l]; ++n)
            {
                state[l][n] = lif_step_with_decay(state[l][n], current[n], decay[l], threshold);
                out.spikes[t * widths[l] + n] = state[l][n].spiked ? 1 : 0;
                out.vmem[t * widths[l] + n] = state[l][n].u;
            }
        }
    }
    trace.prediction = readout_prediction(trace, model.readout);
    return trace;
}

} // namespace dsnn
