#include "dsnn/delayq/ring_buffer.hpp"

#include <string>

#include "dsnn/core/error.hpp"

namespace dsnn {

RingBufferBank::RingBufferBank(const DelayWeightTensor &w, std::size_t slots)
        : w_(&w)
        , slots_(slots)
        , acc_(w.post() * slots, 0.0)
{
    if (slots_ == 0 || static_cast<std::size_t>(w.delays().max_delay()) >= slots_)
    {
        throw ConfigError("ring buffer with " + std::to_string(slots_) +
                " slots cannot hold delay " + std::to_string(w.delays().max_delay()));
    }
}

void RingBufferBank::accumulate(std::span<const std::uint8_t> presyn)
{
    const DelayWeightTensor &w = *w_;
    for (std::size_t i = 0; i < w.pre(); ++i)
    {
        if (!presyn[i])
        {
            continue;
        }
        for (std::size_t level = 0; level < w.num_levels(); ++level)
        {
            const std::size_t slot =
                    (head_ + static_cast<std::size_t>(w.delays()[level])) % slots_;
            const auto row = w.row(level, i);
            for (std::size_t j = 0; j < row.size(); ++j)
            {
                acc_[j * slots_ + slot] += row[j];
            }
            synaptic_ops_ += row.size();
        }
    }
}

void RingBufferBank::drain(std::span<double> current)
{
    for (std::size_t j = 0; j < w_->post(); ++j)
    {
        double &slot = acc_[j * slots_ + head_];
        current[j] += slot;
        slot = 0.0;
    }
    head_ = (head_ + 1) % slots_;
}

} // namespace dsnn
