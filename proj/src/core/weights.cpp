#include "dsnn/core/weights.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>
#include <string>

#include "dsnn/core/error.hpp"

namespace dsnn {

DelayWeightTensor::DelayWeightTensor(DelaySet delays, std::size_t pre, std::size_t post)
        : delays_(std::move(delays))
        , pre_(pre)
        , post_(post)
        , values_(delays_.size() * pre * post, 0.0)
        , mask_(delays_.size() * pre * post, 1)
{
}

void DelayWeightTensor::set_weight(std::size_t level, std::size_t i, std::size_t j, double w)
{
    const std::size_t k = index(level, i, j);
    if (mask_[k] == 0)
    {
        if (w != 0.0)
        {
            throw std::logic_error("set_weight: synapse (" + std::to_string(level) +
                    ", " + std::to_string(i) + ", " + std::to_string(j) + ") is pruned");
        }
        return;
    }
    values_[k] = w;
}

void DelayWeightTensor::assign(std::span<const double> values)
{
    if (values.size() != values_.size())
    {
        throw DimensionError("assign: expected " + std::to_string(values_.size()) +
                " values, got " + std::to_string(values.size()));
    }
    for (std::size_t k = 0; k < values_.size(); ++k)
    {
        values_[k] = mask_[k] ? values[k] : 0.0;
    }
}

void DelayWeightTensor::prune(std::size_t flat_index)
{
    mask_.at(flat_index) = 0;
    values_[flat_index] = 0.0;
}

void DelayWeightTensor::restrict_mask(std::span<const std::uint8_t> mask)
{
    if (mask.size() != mask_.size())
    {
        throw DimensionError("restrict_mask: size mismatch");
    }
    for (std::size_t k = 0; k < mask_.size(); ++k)
    {
        if (mask[k] == 0)
        {
            prune(k);
        }
    }
}

std::size_t DelayWeightTensor::active_count() const
{
    std::size_t n = 0;
    for (auto m : mask_)
    {
        n += m ? 1 : 0;
    }
    return n;
}

std::size_t DelayWeightTensor::live_level_count() const
{
    std::size_t live = 0;
    const std::size_t per_level = pre_ * post_;
    for (std::size_t l = 0; l < num_levels(); ++l)
    {
        for (std::size_t k = 0; k < per_level; ++k)
        {
            if (mask_[l * per_level + k])
            {
                ++live;
                break;
            }
        }
    }
    return live;
}

DelayWeightTensor DelayWeightTensor::select_levels(std::span<const std::size_t> keep) const
{
    std::vector<int> levels;
    levels.reserve(keep.size());
    for (auto l : keep)
    {
        levels.push_back(delays_[l]);
    }
    DelayWeightTensor out(DelaySet(std::move(levels)), pre_, post_);
    const std::size_t per_level = pre_ * post_;
    for (std::size_t n = 0; n < keep.size(); ++n)
    {
        std::memcpy(out.values_.data() + n * per_level,
                values_.data() + keep[n] * per_level, per_level * sizeof(double));
        std::memcpy(out.mask_.data() + n * per_level,
                mask_.data() + keep[n] * per_level, per_level);
    }
    return out;
}

DelayWeightTensor DelayWeightTensor::expand_levels(const DelaySet &superset) const
{
    DelayWeightTensor out(superset, pre_, post_);
    const std::size_t per_level = pre_ * post_;
    for (std::size_t l = 0; l < num_levels(); ++l)
    {
        const auto target = superset.index_of(delays_[l]);
        if (!target)
        {
            throw ConfigError("expand_levels: delay " + std::to_string(delays_[l]) +
                    " missing from superset");
        }
        std::memcpy(out.values_.data() + *target * per_level,
                values_.data() + l * per_level, per_level * sizeof(double));
        std::memcpy(out.mask_.data() + *target * per_level,
                mask_.data() + l * per_level, per_level);
    }
    return out;
}

bool DelayWeightTensor::identical(const DelayWeightTensor &other) const
{
    if (!(delays_ == other.delays_) || pre_ != other.pre_ || post_ != other.post_ ||
            mask_ != other.mask_ || values_.size() != other.values_.size())
    {
        return false;
    }
    for (std::size_t k = 0; k < values_.size(); ++k)
    {
        if (std::bit_cast<std::uint64_t>(values_[k]) !=
                std::bit_cast<std::uint64_t>(other.values_[k]))
        {
            return false;
        }
    }
    return true;
}

} // namespace dsnn
