#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace dsnn {

/// Admissible synaptic delay levels (in timesteps) of one connection.
/// Sorted, unique and non-empty.
class DelaySet
{
public:
    /// The delay-free set {0}.
    DelaySet() : levels_{0} {}
    explicit DelaySet(std::vector<int> levels);

    /// {0, s, 2s, ...} restricted to values below `max_delay`, so (60, 2)
    /// gives the 30 levels {0, 2, ..., 58}. A max_delay of 0 gives {0}.
    static DelaySet strided(int max_delay, int stride);

    std::span<const int> levels() const noexcept { return levels_; }
    std::size_t size() const noexcept { return levels_.size(); }
    int operator[](std::size_t k) const { return levels_[k]; }
    int max_delay() const noexcept { return levels_.back(); }

    /// Number of distinct timestep offsets an event can occupy (max + 1).
    std::size_t span() const noexcept
    {
        return static_cast<std::size_t>(levels_.back()) + 1;
    }

    std::optional<std::size_t> index_of(int delay) const;
    bool contains(int delay) const { return index_of(delay).has_value(); }

    /// Table indexed by delay in [0, span()) giving the level index or -1.
    std::vector<int> index_table() const;

    bool operator==(const DelaySet &) const = default;

private:
    std::vector<int> levels_;
};

} // namespace dsnn
