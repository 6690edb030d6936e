#include "dsnn/delayq/shared_queue.hpp"

#include <algorithm>

#include "dsnn/core/error.hpp"

namespace dsnn {

bool is_axonal(const DelayWeightTensor &w)
{
    const WvuMatrix wvu = wvu_build(w);
    for (std::size_t i = 0; i < w.pre(); ++i)
    {
        if (wvu.row_popcount(i) > 1)
        {
            return false;
        }
    }
    return true;
}

SharedDelayQueue::SharedDelayQueue(const DelayWeightTensor &w, bool multi_copy)
        : w_(&w)
        , wvu_(wvu_build(w))
        , fifos_(w.delays().span())
{
    if (!multi_copy)
    {
        for (std::size_t i = 0; i < w.pre(); ++i)
        {
            if (wvu_.row_popcount(i) > 1)
            {
                throw ModelShapeError("shared delay queue supports axonal delays only: "
                                      "presynaptic neuron " + std::to_string(i) +
                        " uses several delay levels (enable multi-copy mode)");
            }
        }
    }
}

void SharedDelayQueue::push(std::uint32_t source)
{
    bool any = false;
    for (std::size_t level = 0; level < w_->num_levels(); ++level)
    {
        if (!wvu_.get(source, level))
        {
            continue;
        }
        const auto delay = static_cast<std::size_t>(w_->delays()[level]);
        fifos_[delay].push_back(SpikeEvent{source, static_cast<std::uint32_t>(level)});
        ++occupancy_;
        ++stats_.pushes;
        any = true;
    }
    if (!any)
    {
        ++stats_.dropped;
    }
    stats_.peak_occupancy = std::max(stats_.peak_occupancy, occupancy_);
}

void SharedDelayQueue::end_of_timestep(const DeliverFn &deliver)
{
    auto &due = fifos_.front();
    for (const SpikeEvent &ev : due)
    {
        ++stats_.deliveries;
        deliver(ev.source, w_->delays()[ev.counter]);
    }
    occupancy_ -= due.size();
    due.clear();
    std::rotate(fifos_.begin(), fifos_.begin() + 1, fifos_.end());
}

void SharedDelayQueue::note_active(std::size_t count)
{
    stats_.max_active_presyn = std::max(stats_.max_active_presyn, count);
}

} // namespace dsnn
