#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dsnn/core/delay_set.hpp"

namespace dsnn {

/// Weights w[d][i][j] of one delayed projection, stored row-major with the
/// delay level outermost, plus a mask of the synapses that exist.
///
/// Masked-out entries are held at exactly +0.0; every mutating accessor
/// enforces this, so a pruned synapse can never be revived by writing to it.
class DelayWeightTensor
{
public:
    DelayWeightTensor() = default;
    DelayWeightTensor(DelaySet delays, std::size_t pre, std::size_t post);

    const DelaySet &delays() const noexcept { return delays_; }
    std::size_t num_levels() const noexcept { return delays_.size(); }
    std::size_t pre() const noexcept { return pre_; }
    std::size_t post() const noexcept { return post_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::size_t index(std::size_t level, std::size_t i, std::size_t j) const
    {
        return (level * pre_ + i) * post_ + j;
    }

    double weight(std::size_t level, std::size_t i, std::size_t j) const
    {
        return values_[index(level, i, j)];
    }
    bool active(std::size_t level, std::size_t i, std::size_t j) const
    {
        return mask_[index(level, i, j)] != 0;
    }

    /// Throws std::logic_error when a nonzero value targets a masked entry.
    void set_weight(std::size_t level, std::size_t i, std::size_t j, double w);

    /// Overwrites all values; masked positions are forced to zero.
    void assign(std::span<const double> values);

    /// Masks one synapse and zeroes its weight.
    void prune(std::size_t flat_index);
    void prune(std::size_t level, std::size_t i, std::size_t j)
    {
        prune(index(level, i, j));
    }

    /// Replaces the mask (1 = synapse exists); newly masked weights are zeroed.
    /// Entries can only be cleared, never re-enabled, through this call.
    void restrict_mask(std::span<const std::uint8_t> mask);

    std::span<const double> values() const noexcept { return values_; }
    std::span<const std::uint8_t> mask() const noexcept { return mask_; }

    /// Row w[level][i][*].
    std::span<const double> row(std::size_t level, std::size_t i) const
    {
        return {values_.data() + index(level, i, 0), post_};
    }

    std::size_t active_count() const;
    /// Number of levels with at least one surviving synapse.
    std::size_t live_level_count() const;

    /// Keeps only the given levels (indices into delays()), in order.
    DelayWeightTensor select_levels(std::span<const std::size_t> keep) const;

    /// Re-expresses the tensor over a superset of its delay levels; new
    /// levels start at zero weight with their synapses enabled.
    DelayWeightTensor expand_levels(const DelaySet &superset) const;

    /// Bitwise equality of delays, values and mask.
    bool identical(const DelayWeightTensor &other) const;

private:
    DelaySet delays_;
    std::size_t pre_ = 0;
    std::size_t post_ = 0;
    std::vector<double> values_;
    std::vector<std::uint8_t> mask_;
};

} // namespace dsnn
