#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dsnn/core/weights.hpp"

namespace dsnn {

/// Per-postsynaptic-neuron circular accumulators, one slot per timestep of
/// delay. A spike adds w[d][i][j] into slot (head + d) of neuron j; at the
/// end of a timestep the head slot is drained into the neuron and cleared.
class RingBufferBank
{
public:
    /// `slots` defaults to max delay + 1. Throws ConfigError when a delay
    /// level does not fit.
    RingBufferBank(const DelayWeightTensor &w, std::size_t slots);

    std::size_t slots() const noexcept { return slots_; }

    /// Scatter the weights of presynaptic spikes of the current step.
    void accumulate(std::span<const std::uint8_t> presyn);

    /// Add the head slot of every neuron into `current`, zero it, advance.
    void drain(std::span<double> current);

    double slot_value(std::size_t j, std::size_t offset) const
    {
        return acc_[j * slots_ + (head_ + offset) % slots_];
    }

    std::size_t synaptic_ops() const noexcept { return synaptic_ops_; }

private:
    const DelayWeightTensor *w_;
    std::size_t slots_;
    std::size_t head_ = 0;
    std::vector<double> acc_;  // [post][slot]
    std::size_t synaptic_ops_ = 0;
};

} // namespace dsnn
