#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dsnn {

/// Binary input spike raster [t][channel], optionally labelled.
class SpikeRaster
{
public:
    SpikeRaster() = default;
    SpikeRaster(std::size_t timesteps, std::size_t channels);

    std::size_t timesteps() const noexcept { return timesteps_; }
    std::size_t channels() const noexcept { return channels_; }

    bool at(std::size_t t, std::size_t c) const { return bits_[t * channels_ + c] != 0; }
    void set(std::size_t t, std::size_t c, bool spike = true);

    std::span<const std::uint8_t> step(std::size_t t) const
    {
        return {bits_.data() + t * channels_, channels_};
    }

    std::size_t spike_count() const;

    std::optional<int> label;

    bool operator==(const SpikeRaster &) const = default;

private:
    std::size_t timesteps_ = 0;
    std::size_t channels_ = 0;
    std::vector<std::uint8_t> bits_;
};

using Dataset = std::vector<SpikeRaster>;

} // namespace dsnn
