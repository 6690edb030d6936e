#include "dsnn/core/lif.hpp"

#include <cmath>

#include "dsnn/core/error.hpp"

namespace dsnn {

void NeuronParams::validate() const
{
    if (!(tau > 0.0) || !std::isfinite(tau))
    {
        throw ConfigError("NeuronParams: tau must be positive");
    }
    if (!(threshold > 0.0) || !std::isfinite(threshold))
    {
        throw ConfigError("NeuronParams: threshold must be positive");
    }
}

NeuronState lif_step(NeuronState state, double current, const NeuronParams &params)
{
    return lif_step_with_decay(state, current, params.decay(), params.threshold);
}

double layer_input_current(const DelayWeightTensor &w,
        std::span<const std::uint8_t> delayed_spikes, std::size_t j)
{
    if (delayed_spikes.size() != w.num_levels() * w.pre())
    {
        throw DimensionError("layer_input_current: spike history must be [levels][pre]");
    }
    if (j >= w.post())
    {
        throw DimensionError("layer_input_current: postsynaptic index out of range");
    }
    double current = 0.0;
    for (std::size_t level = w.num_levels(); level-- > 0;)
    {
        for (std::size_t i = 0; i < w.pre(); ++i)
        {
            if (delayed_spikes[level * w.pre() + i])
            {
                current += w.weight(level, i, j);
            }
        }
    }
    return current;
}

} // namespace dsnn
