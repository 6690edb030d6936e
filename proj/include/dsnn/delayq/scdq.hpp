#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "dsnn/core/delay_set.hpp"
#include "dsnn/delayq/wvu.hpp"

namespace dsnn {

/// Address-event with the delay it has accumulated so far. The hardware
/// counts a residual delay down; counting elapsed delay up is equivalent and
/// lets one event serve every level it passes.
struct SpikeEvent
{
    std::uint32_t source = 0;
    std::uint32_t counter = 0;  ///< elapsed delay, timesteps

    bool operator==(const SpikeEvent &) const = default;
};

struct QueueStats
{
    std::size_t peak_occupancy = 0;
    std::size_t pushes = 0;         ///< events accepted at the input
    std::size_t dropped = 0;        ///< events discarded by the WVU filter on entry
    std::size_t deliveries = 0;     ///< (source, delay) pairs sent to the output
    std::size_t recirculated = 0;   ///< PRQ -> POQ writes
    std::size_t max_active_presyn = 0;  ///< max spiking presynaptic neurons in one step
};

/// Shared Circular Delay Queue: a pre-processing queue (PRQ) and a
/// post-processing queue (POQ) joined in a loop.
///
/// Input events enter the PRQ. When a timestep ends, an end-of-timestep token
/// is appended behind them and the read controller drains the PRQ: each event
/// is delivered if its elapsed delay is a member level whose WVU bit is set,
/// and is written to the POQ (elapsed + 1) while it still has a useful level
/// ahead of it. Reaching the token swaps PRQ and POQ.
class SharedCircularDelayQueue
{
public:
    using DeliverFn = std::function<void(std::uint32_t source, int delay)>;

    SharedCircularDelayQueue(DelaySet delays, WvuMatrix wvu,
            std::optional<std::size_t> capacity = std::nullopt);

    /// Write controller: accept an event emitted by `source` this timestep.
    /// Events with an all-zero WVU row are dropped. Throws QueueOverflow.
    void push(std::uint32_t source);

    /// Append the EOT token, drain the PRQ through `deliver`, then swap.
    void end_of_timestep(const DeliverFn &deliver);

    std::size_t occupancy() const noexcept { return events_in_prq_ + poq_.size(); }
    const QueueStats &stats() const noexcept { return stats_; }
    const DelaySet &delays() const noexcept { return delays_; }
    const WvuMatrix &wvu() const noexcept { return wvu_; }

    /// Largest elapsed delay an event from `source` can reach, or -1.
    int residency_limit(std::uint32_t source) const { return limit_[source]; }

    /// Events currently waiting in the PRQ (front first), tokens excluded.
    std::vector<SpikeEvent> prq_events() const;
    std::vector<SpikeEvent> poq_events() const { return {poq_.begin(), poq_.end()}; }

    void note_active(std::size_t count);

private:
    struct Slot
    {
        SpikeEvent event;
        bool eot = false;
    };

    void grow_occupancy();

    DelaySet delays_;
    std::vector<int> level_of_delay_;
    WvuMatrix wvu_;
    std::vector<int> limit_;
    std::optional<std::size_t> capacity_;
    std::deque<Slot> prq_;
    std::deque<SpikeEvent> poq_;
    std::size_t events_in_prq_ = 0;
    QueueStats stats_;
};

} // namespace dsnn
