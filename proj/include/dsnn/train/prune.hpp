#pragma once

#include <cstddef>
#include <string>

#include "dsnn/core/network.hpp"

namespace dsnn {

enum class PruneMode
{
    synapse,  ///< remove individual (d, i, j) synapses
    axonal,   ///< remove whole (i, d) delayed axons
};

PruneMode parse_prune_mode(const std::string &name);
std::string to_string(PruneMode mode);

/// What a level-count target of the synapse mode counts.
enum class LevelScope
{
    layer,   ///< distinct delay levels left in the connection
    neuron,  ///< distinct delay levels in each postsynaptic neuron's fan-in
};

LevelScope parse_level_scope(const std::string &name);

struct PruneTarget
{
    enum class Kind
    {
        /// synapse mode: live delay levels per connection;
        /// axonal mode: surviving delayed axons per presynaptic neuron.
        levels,
        /// fraction of currently active synapses (or axons) to keep.
        keep_fraction,
    };
    Kind kind = Kind::levels;
    double value = 0.0;
    LevelScope scope = LevelScope::layer;

    static PruneTarget levels(std::size_t k, LevelScope scope = LevelScope::layer)
    {
        return {Kind::levels, static_cast<double>(k), scope};
    }
    static PruneTarget keep_fraction(double f) { return {Kind::keep_fraction, f, LevelScope::layer}; }
};

/// Prunes every delayed projection (all but the input projection) and drops
/// delay levels that no longer carry a synapse. Throws ConfigError when the
/// target asks for more than is available.
NetworkModel prune_delays(const NetworkModel &model, PruneMode mode, PruneTarget target);

/// Keep the k active synapses of largest |w| (ties: lower flat index wins).
void prune_keep_top_k(DelayWeightTensor &w, std::size_t k);

/// Keep the `levels` delay levels of largest l2 norm and mask every synapse
/// of the others.
void prune_to_level_count(DelayWeightTensor &w, std::size_t levels);

/// For each postsynaptic neuron keep the `levels` fan-in delay levels of
/// largest l2 norm (over presynaptic neurons).
void prune_levels_per_neuron(DelayWeightTensor &w, std::size_t levels);

/// For each presynaptic neuron keep its k axons of largest l2 norm.
void prune_axons_per_neuron(DelayWeightTensor &w, std::size_t k);

/// Keep the given fraction of live axons, ranked globally by l2 norm.
void prune_axons_keep_fraction(DelayWeightTensor &w, double fraction);

/// Remove delay levels without any active synapse (at least one level stays).
DelayWeightTensor compact_levels(const DelayWeightTensor &w);

/// Adds every delay within `radius` of a surviving level (bounded by
/// [0, max_delay)) to each delayed projection, with new synapses at zero
/// weight, so a further train/prune round can refine delay resolution
/// locally.
NetworkModel refine_delays(const NetworkModel &model, int radius, int max_delay);

} // namespace dsnn
