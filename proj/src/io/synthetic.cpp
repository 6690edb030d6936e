#include "dsnn/io/synthetic.hpp"

#include <algorithm>

#include "dsnn/core/error.hpp"
#include "dsnn/core/rng.hpp"

namespace dsnn {

void CoincidenceSpec::validate() const
{
    if (lags.empty())
    {
        throw ConfigError("coincidence task needs at least one lag");
    }
    if (pairs == 0)
    {
        throw ConfigError("coincidence task needs at least one spike pair");
    }
    for (int lag : lags)
    {
        if (lag < 0 || static_cast<std::size_t>(lag) >= timesteps)
        {
            throw ConfigError("lag " + std::to_string(lag) + " does not fit in " +
                    std::to_string(timesteps) + " timesteps");
        }
    }
    if (noise_rate < 0.0 || noise_rate > 1.0)
    {
        throw ConfigError("noise_rate must be in [0, 1]");
    }
}

Dataset gen_synthetic(const CoincidenceSpec &spec, std::size_t n, std::uint64_t seed)
{
    spec.validate();
    Rng rng(seed);
    std::vector<int> classes(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        classes[k] = static_cast<int>(k % spec.lags.size());
    }
    rng.shuffle(classes);

    Dataset data;
    data.reserve(n);
    for (int cls : classes)
    {
        const auto lag = static_cast<std::size_t>(spec.lags[static_cast<std::size_t>(cls)]);
        SpikeRaster r(spec.timesteps, 2);
        for (std::size_t t = 0; t < spec.timesteps; ++t)
        {
            for (std::size_t c = 0; c < 2; ++c)
            {
                if (spec.noise_rate > 0.0 && rng.bernoulli(spec.noise_rate))
                {
                    r.set(t, c);
                }
            }
        }
        for (std::size_t p = 0; p < spec.pairs; ++p)
        {
            const std::size_t t0 = rng.below(spec.timesteps - lag);
            r.set(t0, 0);
            r.set(t0 + lag, 1);
        }
        r.label = cls;
        data.push_back(std::move(r));
    }
    return data;
}

} // namespace dsnn
