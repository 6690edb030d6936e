#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

#include "dsnn/core/weights.hpp"

namespace dsnn {

struct NeuronParams
{
    double tau = 2.0;        ///< leak time constant, timesteps
    double threshold = 1.0;  ///< firing threshold u_th

    double decay() const { return std::exp(-1.0 / tau); }
    void validate() const;
    bool operator==(const NeuronParams &) const = default;
};

struct NeuronState
{
    double u = 0.0;
    bool spiked = false;  ///< spike emitted on the previous step
};

/// One discrete LIF update:
///   u' = u * exp(-1/tau) * (1 - spiked) + current
///   spiked' = (u' >= threshold)
/// A spike on the previous step removes the leak term entirely (reset).
NeuronState lif_step(NeuronState state, double current, const NeuronParams &params);

/// Same update with the decay factor precomputed, for inner loops.
inline NeuronState lif_step_with_decay(NeuronState state, double current,
        double decay, double threshold)
{
    const double u = state.spiked ? current : state.u * decay + current;
    return {u, u >= threshold};
}

/// Synaptic current into postsynaptic neuron j:
///   sum over delay levels d and presynaptic i of w[d][i][j] * spike[d][i],
/// where delayed_spikes[d][i] is neuron i's spike emitted levels()[d] steps
/// ago. delayed_spikes is laid out [level][pre].
///
/// The accumulation order (levels descending, presynaptic ascending) is the
/// order in which every event-driven backend receives the same contributions.
double layer_input_current(const DelayWeightTensor &w,
        std::span<const std::uint8_t> delayed_spikes, std::size_t j);

} // namespace dsnn
