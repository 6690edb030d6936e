#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "dsnn/core/weights.hpp"
#include "dsnn/delayq/scdq.hpp"

namespace dsnn {

/// Cascade of FIFOs, one per timestep of delay: FIFO k holds events due in k
/// steps. Each event enters once (at the FIFO of its axonal delay) and leaves
/// once. Per-synapse delay models are rejected unless multi-copy mode is
/// enabled, in which one copy per useful (i, d) axon is enqueued.
class SharedDelayQueue
{
public:
    using DeliverFn = std::function<void(std::uint32_t source, int delay)>;

    SharedDelayQueue(const DelayWeightTensor &w, bool multi_copy);

    void push(std::uint32_t source);
    /// Deliver FIFO 0, then shift every FIFO one step toward the output.
    void end_of_timestep(const DeliverFn &deliver);

    std::size_t occupancy() const noexcept { return occupancy_; }
    const QueueStats &stats() const noexcept { return stats_; }
    void note_active(std::size_t count);

private:
    const DelayWeightTensor *w_;
    WvuMatrix wvu_;
    std::vector<std::deque<SpikeEvent>> fifos_;  // counter holds the level index
    std::size_t occupancy_ = 0;
    QueueStats stats_;
};

/// True when every presynaptic neuron uses at most one delay level with
/// nonzero weights.
bool is_axonal(const DelayWeightTensor &w);

} // namespace dsnn
