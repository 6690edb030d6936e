#include "dsnn/core/raster.hpp"

#include <numeric>

namespace dsnn {

SpikeRaster::SpikeRaster(std::size_t timesteps, std::size_t channels)
        : timesteps_(timesteps)
        , channels_(channels)
        , bits_(timesteps * channels, 0)
{
}

void SpikeRaster::set(std::size_t t, std::size_t c, bool spike)
{
    bits_.at(t * channels_ + c) = spike ? 1 : 0;
}

std::size_t SpikeRaster::spike_count() const
{
    return std::accumulate(bits_.begin(), bits_.end(), std::size_t{0});
}

} // namespace dsnn
