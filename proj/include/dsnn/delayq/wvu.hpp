#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dsnn/core/weights.hpp"

namespace dsnn {

/// "Weight value useful" matrix: bit (i, d) is set when presynaptic neuron i
/// has at least one nonzero weight at delay level d.
class WvuMatrix
{
public:
    WvuMatrix() = default;
    WvuMatrix(std::size_t pre, std::size_t levels);

    /// Every bit set; disables zero-skipping.
    static WvuMatrix all_ones(std::size_t pre, std::size_t levels);

    std::size_t pre() const noexcept { return pre_; }
    std::size_t levels() const noexcept { return levels_; }

    bool get(std::size_t i, std::size_t level) const
    {
        return (words_[i * words_per_row_ + level / 64] >> (level % 64)) & 1U;
    }
    void set(std::size_t i, std::size_t level, bool value = true);

    bool row_empty(std::size_t i) const;
    std::size_t row_popcount(std::size_t i) const;

    /// Leading zeros of row i read as a `levels()`-bit number whose most
    /// significant bit is the highest delay level.
    std::size_t clz(std::size_t i) const;

    bool operator==(const WvuMatrix &) const = default;

private:
    std::size_t pre_ = 0;
    std::size_t levels_ = 0;
    std::size_t words_per_row_ = 0;
    std::vector<std::uint64_t> words_;
};

WvuMatrix wvu_build(const DelayWeightTensor &w);

/// Highest useful level index of row i: levels - 1 - clz(row), or -1 for an
/// all-zero row (such events are never enqueued). An event is carried over
/// to the next timestep only while its elapsed delay is below the delay of
/// this level.
int wvu_max_residency(const WvuMatrix &wvu, std::size_t i);

} // namespace dsnn
