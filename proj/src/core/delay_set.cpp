#include "dsnn/core/delay_set.hpp"

#include <algorithm>
#include <string>

#include "dsnn/core/error.hpp"

namespace dsnn {

DelaySet::DelaySet(std::vector<int> levels) : levels_(std::move(levels))
{
    if (levels_.empty())
    {
        throw ConfigError("DelaySet: at least one delay level is required");
    }
    for (std::size_t k = 0; k < levels_.size(); ++k)
    {
        if (levels_[k] < 0)
        {
            throw ConfigError("DelaySet: negative delay " + std::to_string(levels_[k]));
        }
        if (k > 0 && levels_[k] <= levels_[k - 1])
        {
            throw ConfigError("DelaySet: levels must be strictly increasing");
        }
    }
}

DelaySet DelaySet::strided(int max_delay, int stride)
{
    if (stride <= 0)
    {
        throw ConfigError("DelaySet: stride must be positive");
    }
    if (max_delay < 0)
    {
        throw ConfigError("DelaySet: max delay must be non-negative");
    }
    std::vector<int> levels{0};
    for (int d = stride; d < max_delay; d += stride)
    {
        levels.push_back(d);
    }
    return DelaySet(std::move(levels));
}

std::optional<std::size_t> DelaySet::index_of(int delay) const
{
    const auto it = std::lower_bound(levels_.begin(), levels_.end(), delay);
    if (it == levels_.end() || *it != delay)
    {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - levels_.begin());
}

std::vector<int> DelaySet::index_table() const
{
    std::vector<int> table(span(), -1);
    for (std::size_t k = 0; k < levels_.size(); ++k)
    {
        table[static_cast<std::size_t>(levels_[k])] = static_cast<int>(k);
    }
    return table;
}

} // namespace dsnn
