#include "dsnn/core/trace.hpp"

#include <bit>
#include <cstring>
#include <numeric>

namespace dsnn {

SimTrace::SimTrace(std::size_t timesteps_, std::span<const std::size_t> layer_widths)
        : timesteps(timesteps_)
{
    layers.reserve(layer_widths.size());
    for (auto w : layer_widths)
    {
        LayerTrace layer;
        layer.width = w;
        layer.spikes.assign(timesteps * w, 0);
        layer.vmem.assign(timesteps * w, 0.0);
        layers.push_back(std::move(layer));
    }
}

std::size_t SimTrace::spike_count(std::size_t layer) const
{
    const auto &s = layers[layer].spikes;
    return std::accumulate(s.begin(), s.end(), std::size_t{0});
}

std::vector<std::size_t> SimTrace::output_counts() const
{
    const LayerTrace &out = layers.back();
    std::vector<std::size_t> counts(out.width, 0);
    for (std::size_t t = 0; t < timesteps; ++t)
    {
        for (std::size_t n = 0; n < out.width; ++n)
        {
            counts[n] += out.spikes[t * out.width + n];
        }
    }
    return counts;
}

int readout_prediction(const SimTrace &trace, ReadoutKind kind)
{
    if (trace.layers.empty() || trace.timesteps == 0)
    {
        return -1;
    }
    const LayerTrace &out = trace.layers.back();
    const std::size_t last = (trace.timesteps - 1) * out.width;
    int best = 0;
    if (kind == ReadoutKind::spike_count)
    {
        const auto counts = trace.output_counts();
        for (std::size_t n = 1; n < out.width; ++n)
        {
            const auto b = static_cast<std::size_t>(best);
            if (counts[n] > counts[b] ||
                    (counts[n] == counts[b] && out.vmem[last + n] > out.vmem[last + b]))
            {
                best = static_cast<int>(n);
            }
        }
        return best;
    }

    std::vector<double> peak(out.vmem.begin(), out.vmem.begin() + out.width);
    for (std::size_t t = 1; t < trace.timesteps; ++t)
    {
        for (std::size_t n = 0; n < out.width; ++n)
        {
            peak[n] = std::max(peak[n], out.vmem[t * out.width + n]);
        }
    }
    for (std::size_t n = 1; n < out.width; ++n)
    {
        if (peak[n] > peak[static_cast<std::size_t>(best)])
        {
            best = static_cast<int>(n);
        }
    }
    return best;
}

bool bit_identical(const SimTrace &a, const SimTrace &b)
{
    if (a.timesteps != b.timesteps || a.prediction != b.prediction ||
            a.layers.size() != b.layers.size())
    {
        return false;
    }
    for (std::size_t l = 0; l < a.layers.size(); ++l)
    {
        const auto &x = a.layers[l];
        const auto &y = b.layers[l];
        if (x.width != y.width || x.spikes != y.spikes || x.vmem.size() != y.vmem.size())
        {
            return false;
        }
        if (std::memcmp(x.vmem.data(), y.vmem.data(), x.vmem.size() * sizeof(double)) != 0)
        {
            return false;
        }
    }
    return true;
}

} // namespace dsnn
