#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dsnn/core/raster.hpp"

namespace dsnn {

/// Delayed-coincidence task: channel 0 fires at some t0 and channel 1 fires
/// lag steps later; the class is the index of the lag in `lags`.
struct CoincidenceSpec
{
    std::size_t timesteps = 32;
    std::vector<int> lags{2, 6, 10};
    /// Channel-0/channel-1 pairs per sample, all with the sample's lag.
    std::size_t pairs = 1;
    /// Probability of an extra background spike per (t, channel).
    double noise_rate = 0.0;

    /// Throws ConfigError when a lag does not fit within the window.
    void validate() const;
};

/// n labelled rasters with balanced classes, in a seeded random order.
Dataset gen_synthetic(const CoincidenceSpec &spec, std::size_t n, std::uint64_t seed);

} // namespace dsnn
