#include "dsnn/delayq/scdq.hpp"

#include <algorithm>
#include <utility>

#include "dsnn/core/error.hpp"

namespace dsnn {

SharedCircularDelayQueue::SharedCircularDelayQueue(DelaySet delays, WvuMatrix wvu,
        std::optional<std::size_t> capacity)
        : delays_(std::move(delays))
        , level_of_delay_(delays_.index_table())
        , wvu_(std::move(wvu))
        , capacity_(capacity)
{
    if (wvu_.levels() != delays_.size())
    {
        throw DimensionError("SCDQ: WVU matrix width must equal the number of delay levels");
    }
    limit_.resize(wvu_.pre());
    for (std::size_t i = 0; i < wvu_.pre(); ++i)
    {
        const int top = wvu_max_residency(wvu_, i);
        limit_[i] = top < 0 ? -1 : delays_[static_cast<std::size_t>(top)];
    }
}

void SharedCircularDelayQueue::grow_occupancy()
{
    if (capacity_ && occupancy() >= *capacity_)
    {
        throw QueueOverflow(*capacity_, stats_.peak_occupancy);
    }
}

void SharedCircularDelayQueue::push(std::uint32_t source)
{
    if (source >= limit_.size())
    {
        throw DimensionError("SCDQ: source neuron out of range");
    }
    if (limit_[source] < 0)
    {
        ++stats_.dropped;
        return;
    }
    grow_occupancy();
    prq_.push_back(Slot{SpikeEvent{source, 0}, false});
    ++events_in_prq_;
    ++stats_.pushes;
    stats_.peak_occupancy = std::max(stats_.peak_occupancy, occupancy());
}

void SharedCircularDelayQueue::end_of_timestep(const DeliverFn &deliver)
{
    prq_.push_back(Slot{SpikeEvent{}, true});
    for (;;)
    {
        const Slot slot = prq_.front();
        prq_.pop_front();
        if (slot.eot)
        {
            break;
        }
        --events_in_prq_;

        const SpikeEvent ev = slot.event;
        const auto elapsed = static_cast<int>(ev.counter);
        if (static_cast<std::size_t>(elapsed) < level_of_delay_.size())
        {
            const int level = level_of_delay_[static_cast<std::size_t>(elapsed)];
            if (level >= 0 && wvu_.get(ev.source, static_cast<std::size_t>(level)))
            {
                ++stats_.deliveries;
                deliver(ev.source, elapsed);
            }
        }
        if (elapsed < limit_[ev.source])
        {
            grow_occupancy();
            poq_.push_back(SpikeEvent{ev.source, ev.counter + 1});
            ++stats_.recirculated;
            stats_.peak_occupancy = std::max(stats_.peak_occupancy, occupancy());
        }
    }

    // Buffer swap: the PRQ is empty once the token has been consumed.
    for (const SpikeEvent &ev : poq_)
    {
        prq_.push_back(Slot{ev, false});
    }
    events_in_prq_ = poq_.size();
    poq_.clear();
}

std::vector<SpikeEvent> SharedCircularDelayQueue::prq_events() const
{
    std::vector<SpikeEvent> out;
    out.reserve(events_in_prq_);
    for (const Slot &s : prq_)
    {
        if (!s.eot)
        {
            out.push_back(s.event);
        }
    }
    return out;
}

void SharedCircularDelayQueue::note_active(std::size_t count)
{
    stats_.max_active_presyn = std::max(stats_.max_active_presyn, count);
}

} // namespace dsnn
