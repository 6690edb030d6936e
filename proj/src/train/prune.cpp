#include "dsnn/train/prune.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "dsnn/core/error.hpp"

namespace dsnn {

PruneMode parse_prune_mode(const std::string &name)
{
    if (name == "synapse")
    {
        return PruneMode::synapse;
    }
    if (name == "axonal")
    {
        return PruneMode::axonal;
    }
    throw ConfigError("unknown prune mode '" + name + "' (expected synapse or axonal)");
}

LevelScope parse_level_scope(const std::string &name)
{
    if (name == "layer")
    {
        return LevelScope::layer;
    }
    if (name == "neuron")
    {
        return LevelScope::neuron;
    }
    throw ConfigError("unknown level scope '" + name + "' (expected layer or neuron)");
}

std::string to_string(PruneMode mode)
{
    return mode == PruneMode::synapse ? "synapse" : "axonal";
}

namespace {

// Active flat indices ordered by increasing |w|, ties by index.
std::vector<std::size_t> active_by_magnitude(const DelayWeightTensor &w)
{
    std::vector<std::size_t> idx;
    const auto mask = w.mask();
    for (std::size_t k = 0; k < mask.size(); ++k)
    {
        if (mask[k])
        {
            idx.push_back(k);
        }
    }
    const auto v = w.values();
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(v[a]) < std::abs(v[b]);
    });
    return idx;
}

struct Axon
{
    std::size_t level;
    std::size_t pre;
    double norm;
};

std::vector<Axon> live_axons(const DelayWeightTensor &w)
{
    std::vector<Axon> axons;
    for (std::size_t level = 0; level < w.num_levels(); ++level)
    {
        for (std::size_t i = 0; i < w.pre(); ++i)
        {
            bool live = false;
            double sq = 0.0;
            for (std::size_t j = 0; j < w.post(); ++j)
            {
                live = live || w.active(level, i, j);
                sq += w.weight(level, i, j) * w.weight(level, i, j);
            }
            if (live)
            {
                axons.push_back(Axon{level, i, std::sqrt(sq)});
            }
        }
    }
    return axons;
}

void prune_axon(DelayWeightTensor &w, std::size_t level, std::size_t i)
{
    for (std::size_t j = 0; j < w.post(); ++j)
    {
        w.prune(level, i, j);
    }
}

} // namespace

void prune_keep_top_k(DelayWeightTensor &w, std::size_t k)
{
    const auto order = active_by_magnitude(w);
    if (k > order.size())
    {
        throw ConfigError("prune: cannot keep " + std::to_string(k) + " of " +
                std::to_string(order.size()) + " active synapses");
    }
    // Largest |w| last in `order`; equal magnitudes keep the lower index.
    std::vector<std::size_t> ranked(order.begin(), order.end());
    const auto v = w.values();
    std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(v[a]) > std::abs(v[b]);
    });
    for (std::size_t n = k; n < ranked.size(); ++n)
    {
        w.prune(ranked[n]);
    }
}

namespace {

struct Level
{
    std::size_t level;
    double norm;
};

// Keeps the `k` largest-norm entries of `live` and returns the others,
// equal norms favouring the lower delay.
std::vector<Level> weakest_beyond(std::vector<Level> live, std::size_t k)
{
    std::stable_sort(live.begin(), live.end(),
            [](const Level &a, const Level &b) { return a.norm > b.norm; });
    if (live.size() <= k)
    {
        return {};
    }
    return {live.begin() + static_cast<std::ptrdiff_t>(k), live.end()};
}

} // namespace

void prune_to_level_count(DelayWeightTensor &w, std::size_t levels)
{
    std::vector<Level> live;
    for (std::size_t d = 0; d < w.num_levels(); ++d)
    {
        bool any = false;
        double sq = 0.0;
        for (std::size_t i = 0; i < w.pre(); ++i)
        {
            for (std::size_t j = 0; j < w.post(); ++j)
            {
                any = any || w.active(d, i, j);
                sq += w.weight(d, i, j) * w.weight(d, i, j);
            }
        }
        if (any)
        {
            live.push_back(Level{d, std::sqrt(sq)});
        }
    }
    if (levels == 0 || levels > live.size())
    {
        throw ConfigError("prune: target of " + std::to_string(levels) +
                " delay levels exceeds the " + std::to_string(live.size()) + " available");
    }
    for (const auto &lv : weakest_beyond(live, levels))
    {
        for (std::size_t i = 0; i < w.pre(); ++i)
        {
            for (std::size_t j = 0; j < w.post(); ++j)
            {
                w.prune(lv.level, i, j);
            }
        }
    }
}

void prune_levels_per_neuron(DelayWeightTensor &w, std::size_t levels)
{
    if (levels == 0 || levels > w.num_levels())
    {
        throw ConfigError("prune: target of " + std::to_string(levels) +
                " delay levels per neuron must lie in [1, " + std::to_string(w.num_levels()) +
                "]");
    }
    for (std::size_t j = 0; j < w.post(); ++j)
    {
        std::vector<Level> live;
        for (std::size_t d = 0; d < w.num_levels(); ++d)
        {
            bool any = false;
            double sq = 0.0;
            for (std::size_t i = 0; i < w.pre(); ++i)
            {
                any = any || w.active(d, i, j);
                sq += w.weight(d, i, j) * w.weight(d, i, j);
            }
            if (any)
            {
                live.push_back(Level{d, std::sqrt(sq)});
            }
        }
        for (const auto &lv : weakest_beyond(live, levels))
        {
            for (std::size_t i = 0; i < w.pre(); ++i)
            {
                w.prune(lv.level, i, j);
            }
        }
    }
}

void prune_axons_per_neuron(DelayWeightTensor &w, std::size_t k)
{
    if (k == 0 || k > w.num_levels())
    {
        throw ConfigError("prune: axon target " + std::to_string(k) + " must lie in [1, " +
                std::to_string(w.num_levels()) + "]");
    }
    auto axons = live_axons(w);
    for (std::size_t i = 0; i < w.pre(); ++i)
    {
        std::vector<Axon> mine;
        for (const auto &a : axons)
        {
            if (a.pre == i)
            {
                mine.push_back(a);
            }
        }
        std::stable_sort(mine.begin(), mine.end(),
                [](const Axon &a, const Axon &b) { return a.norm > b.norm; });
        for (std::size_t n = k; n < mine.size(); ++n)
        {
            prune_axon(w, mine[n].level, mine[n].pre);
        }
    }
}

void prune_axons_keep_fraction(DelayWeightTensor &w, double fraction)
{
    if (!(fraction > 0.0 && fraction <= 1.0))
    {
        throw ConfigError("prune: keep fraction must lie in (0, 1]");
    }
    auto axons = live_axons(w);
    const auto keep = static_cast<std::size_t>(
            std::ceil(fraction * static_cast<double>(axons.size())));
    std::stable_sort(axons.begin(), axons.end(),
            [](const Axon &a, const Axon &b) { return a.norm > b.norm; });
    for (std::size_t n = keep; n < axons.size(); ++n)
    {
        prune_axon(w, axons[n].level, axons[n].pre);
    }
}

DelayWeightTensor compact_levels(const DelayWeightTensor &w)
{
    const std::size_t per_level = w.pre() * w.post();
    const auto mask = w.mask();
    std::vector<std::size_t> keep;
    for (std::size_t level = 0; level < w.num_levels(); ++level)
    {
        const auto first = mask.begin() + static_cast<std::ptrdiff_t>(level * per_level);
        if (std::any_of(first, first + static_cast<std::ptrdiff_t>(per_level),
                    [](std::uint8_t m) { return m != 0; }))
        {
            keep.push_back(level);
        }
    }
    if (keep.empty())
    {
        keep.push_back(0);
    }
    if (keep.size() == w.num_levels())
    {
        return w;
    }
    return w.select_levels(keep);
}

NetworkModel prune_delays(const NetworkModel &model, PruneMode mode, PruneTarget target)
{
    model.validate();
    NetworkModel out = model;
    for (std::size_t l = 1; l < out.connections.size(); ++l)
    {
        DelayWeightTensor &w = out.connections[l];
        if (target.kind == PruneTarget::Kind::levels)
        {
            const double rounded = std::round(target.value);
            if (rounded != target.value || target.value < 1.0)
            {
                throw ConfigError("prune: level target must be a positive integer");
            }
            const auto k = static_cast<std::size_t>(rounded);
            if (mode == PruneMode::synapse && target.scope == LevelScope::layer)
            {
                prune_to_level_count(w, k);
            }
            else if (mode == PruneMode::synapse)
            {
                prune_levels_per_neuron(w, k);
            }
            else
            {
                prune_axons_per_neuron(w, k);
            }
        }
        else if (mode == PruneMode::synapse)
        {
            if (!(target.value > 0.0 && target.value <= 1.0))
            {
                throw ConfigError("prune: keep fraction must lie in (0, 1]");
            }
            const auto keep = static_cast<std::size_t>(
                    std::ceil(target.value * static_cast<double>(w.active_count())));
            prune_keep_top_k(w, keep);
        }
        else
        {
            prune_axons_keep_fraction(w, target.value);
        }
        w = compact_levels(w);
    }
    out.validate();
    return out;
}

NetworkModel refine_delays(const NetworkModel &model, int radius, int max_delay)
{
    if (radius < 0)
    {
        throw ConfigError("refine: radius must be non-negative");
    }
    NetworkModel out = model;
    for (std::size_t l = 1; l < out.connections.size(); ++l)
    {
        const DelayWeightTensor compacted = compact_levels(out.connections[l]);
        std::set<int> levels;
        for (int d : compacted.delays().levels())
        {
            for (int k = d - radius; k <= d + radius; ++k)
            {
                if (k >= 0 && (k < max_delay || k == d))
                {
                    levels.insert(k);
                }
            }
        }
        out.connections[l] = compacted.expand_levels(
                DelaySet(std::vector<int>(levels.begin(), levels.end())));
    }
    out.validate();
    return out;
}

} // namespace dsnn
