#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "dsnn/core/weights.hpp"
#include "dsnn/delayq/scdq.hpp"

namespace dsnn {

/// Queue capacity in events and the matching storage in bits.
struct QueueCost
{
    double events = 0.0;
    double bits = 0.0;
};

/// Per-postsynaptic-neuron ring buffers: J * D slots of w_bits each.
double mem_ring(std::size_t post, std::size_t levels, std::size_t weight_bits);

/// Cascaded shared delay queue, closed form 1/2 * alpha * I * (D^2 + D).
QueueCost mem_sharedq(double alpha, std::size_t pre, std::size_t levels,
        std::size_t event_bits = 16);

/// The same structure summed slot by slot, alpha * I * sum_{d=1..D} (D - d).
/// This differs from the closed form above; both are reported.
QueueCost mem_sharedq_summation(double alpha, std::size_t pre, std::size_t levels,
        std::size_t event_bits = 16);

/// Shared circular delay queue: alpha * I * (2D - 1).
QueueCost mem_scdq(double alpha, std::size_t pre, std::size_t levels,
        std::size_t event_bits = 16);

/// Activation fraction below which the SCDQ needs fewer bits than a ring
/// buffer: ring_bits / scdq_bits_at_alpha1.
double crossover_alpha(double ring_bits, double scdq_bits_at_alpha1);

/// Crossover rounded down to a multiple of 0.05, the granularity used when
/// quoting it (0.252 -> 0.25, 0.516 -> 0.5).
double reported_crossover(double alpha);

/// Reference platform constraints for the cost comparison.
struct PlatformPreset
{
    std::string name;
    std::size_t neurons = 0;      ///< I = J
    std::size_t delay_steps = 0;  ///< D
    std::size_t weight_bits = 0;  ///< ring-buffer slot width
    std::size_t event_bits = 16;
};

PlatformPreset truenorth_preset();
PlatformPreset loihi_preset();
PlatformPreset spinnaker_preset();
/// "truenorth", "loihi", "spinnaker"; throws ConfigError otherwise.
PlatformPreset preset_by_name(const std::string &name);

struct PresetReport
{
    PlatformPreset preset;
    double ring_bits = 0.0;
    QueueCost sharedq;            ///< closed form
    QueueCost sharedq_summation;  ///< slot-by-slot sum
    QueueCost scdq;
    double crossover = 0.0;
    double crossover_reported = 0.0;
};

/// Worst-case (alpha = 1) costs for a preset.
PresetReport preset_report(const PlatformPreset &preset);

/// Human-readable summary lines for a preset.
void print_preset_report(std::ostream &os, const PresetReport &r);

struct SweepRow
{
    std::size_t levels = 0;
    std::size_t neurons = 0;
    double sharedq_events = 0.0;
    double scdq_events = 0.0;
};

/// Worst-case queue capacities across every (levels, neurons) combination.
std::vector<SweepRow> scaling_sweep(const std::vector<std::size_t> &levels,
        const std::vector<std::size_t> &neurons);

void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows);

/// Measured costs of a simulated connection.
struct CostReport
{
    std::size_t connection = 0;
    std::size_t pre = 0;
    std::size_t post = 0;
    std::size_t levels = 0;          ///< delay levels in the set
    std::size_t delay_span = 0;      ///< max delay + 1, timesteps
    std::size_t parameters = 0;      ///< surviving synapses
    std::size_t index_bits = 0;      ///< sparse index overhead for the survivors
    double alpha = 0.0;              ///< measured max activation fraction
    std::size_t peak_occupancy = 0;  ///< measured SCDQ peak, events
    double scdq_bound_events = 0.0;  ///< alpha * I * (2 * span - 1)
    double ring_bits = 0.0;
    double sharedq_bits = 0.0;
    double scdq_bits = 0.0;
    std::size_t pushes = 0;
    std::size_t deliveries = 0;
    std::size_t synaptic_ops = 0;    ///< deliveries times post fan-out
};

/// Cost of one connection as simulated on the SCDQ, with `stats` taken from
/// forward_scdq and alpha measured as the peak fraction of active inputs.
CostReport connection_cost(const DelayWeightTensor &w, std::size_t connection,
        const QueueStats &stats, std::size_t weight_bits, std::size_t event_bits = 16);

} // namespace dsnn
