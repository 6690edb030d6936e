#include "dsnn/metrics/memory_cost.hpp"

#include <cmath>
#include <iomanip>

#include "dsnn/core/error.hpp"

namespace dsnn {

double mem_ring(std::size_t post, std::size_t levels, std::size_t weight_bits)
{
    return static_cast<double>(post) * static_cast<double>(levels) *
            static_cast<double>(weight_bits);
}

QueueCost mem_sharedq(double alpha, std::size_t pre, std::size_t levels, std::size_t event_bits)
{
    const auto d = static_cast<double>(levels);
    QueueCost c;
    c.events = 0.5 * alpha * static_cast<double>(pre) * (d * d + d);
    c.bits = c.events * static_cast<double>(event_bits);
    return c;
}

QueueCost mem_sharedq_summation(double alpha, std::size_t pre, std::size_t levels,
        std::size_t event_bits)
{
    double slots = 0.0;
    for (std::size_t d = 1; d <= levels; ++d)
    {
        slots += static_cast<double>(levels - d);
    }
    QueueCost c;
    c.events = alpha * static_cast<double>(pre) * slots;
    c.bits = c.events * static_cast<double>(event_bits);
    return c;
}

QueueCost mem_scdq(double alpha, std::size_t pre, std::size_t levels, std::size_t event_bits)
{
    QueueCost c;
    if (levels == 0)
    {
        return c;
    }
    c.events = alpha * static_cast<double>(pre) * (2.0 * static_cast<double>(levels) - 1.0);
    c.bits = c.events * static_cast<double>(event_bits);
    return c;
}

double crossover_alpha(double ring_bits, double scdq_bits_at_alpha1)
{
    if (!(scdq_bits_at_alpha1 > 0.0))
    {
        throw ConfigError("crossover_alpha: SCDQ cost must be positive");
    }
    return ring_bits / scdq_bits_at_alpha1;
}

double reported_crossover(double alpha)
{
    // Small epsilon so exact multiples (e.g. 1.0) are not pushed down a step.
    return std::floor(alpha * 20.0 + 1e-9) / 20.0;
}

PlatformPreset truenorth_preset()
{
    // Ring width is not part of the TrueNorth comparison; 8 bits is a placeholder.
    return {"truenorth", 256, 16, 8, 16};
}

PlatformPreset loihi_preset()
{
    return {"loihi", 48, 64, 8, 16};
}

PlatformPreset spinnaker_preset()
{
    return {"spinnaker", 256, 16, 16, 16};
}

PlatformPreset preset_by_name(const std::string &name)
{
    if (name == "truenorth")
    {
        return truenorth_preset();
    }
    if (name == "loihi")
    {
        return loihi_preset();
    }
    if (name == "spinnaker")
    {
        return spinnaker_preset();
    }
    throw ConfigError("unknown preset '" + name + "' (expected truenorth, loihi or spinnaker)");
}

PresetReport preset_report(const PlatformPreset &preset)
{
    PresetReport r;
    r.preset = preset;
    r.ring_bits = mem_ring(preset.neurons, preset.delay_steps, preset.weight_bits);
    r.sharedq = mem_sharedq(1.0, preset.neurons, preset.delay_steps, preset.event_bits);
    r.sharedq_summation =
            mem_sharedq_summation(1.0, preset.neurons, preset.delay_steps, preset.event_bits);
    r.scdq = mem_scdq(1.0, preset.neurons, preset.delay_steps, preset.event_bits);
    r.crossover = crossover_alpha(r.ring_bits, r.scdq.bits);
    r.crossover_reported = reported_crossover(r.crossover);
    return r;
}

void print_preset_report(std::ostream &os, const PresetReport &r)
{
    const auto &p = r.preset;
    os << std::fixed << std::setprecision(0);
    os << "preset " << p.name << ": neurons=" << p.neurons << " delay_steps=" << p.delay_steps
       << " weight_bits=" << p.weight_bits << " event_bits=" << p.event_bits << '\n';
    os << "  shared_delay_queue_events " << r.sharedq.events
       << " (slot-sum form " << r.sharedq_summation.events << ")\n";
    os << "  scdq_events " << r.scdq.events << '\n';
    os << "  ring_buffer_bits " << r.ring_bits << '\n';
    os << "  shared_delay_queue_bits " << r.sharedq.bits << '\n';
    os << "  scdq_bits " << r.scdq.bits << '\n';
    os << std::setprecision(3) << "  crossover_alpha " << r.crossover << std::defaultfloat
       << " (reported " << r.crossover_reported << ")\n";
    os << std::defaultfloat << std::setprecision(6);
}

std::vector<SweepRow> scaling_sweep(const std::vector<std::size_t> &levels,
        const std::vector<std::size_t> &neurons)
{
    std::vector<SweepRow> rows;
    for (auto n : neurons)
    {
        for (auto d : levels)
        {
            rows.push_back(SweepRow{d, n, mem_sharedq(1.0, n, d).events, mem_scdq(1.0, n, d).events});
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows)
{
    os << "levels,neurons,shared_queue_events,scdq_events\n";
    os << std::fixed << std::setprecision(0);
    for (const auto &r : rows)
    {
        os << r.levels << ',' << r.neurons << ',' << r.sharedq_events << ',' << r.scdq_events
           << '\n';
    }
    os << std::defaultfloat << std::setprecision(6);
}

CostReport connection_cost(const DelayWeightTensor &w, std::size_t connection,
        const QueueStats &stats, std::size_t weight_bits, std::size_t event_bits)
{
    CostReport r;
    r.connection = connection;
    r.pre = w.pre();
    r.post = w.post();
    r.levels = w.num_levels();
    r.delay_span = w.delays().span();
    r.parameters = w.active_count();
    std::size_t address_bits = 0;
    while ((std::size_t{1} << address_bits) < w.size())
    {
        ++address_bits;
    }
    r.index_bits = r.parameters * address_bits;
    r.alpha = static_cast<double>(stats.max_active_presyn) / static_cast<double>(w.pre());
    r.peak_occupancy = stats.peak_occupancy;
    r.scdq_bound_events = static_cast<double>(stats.max_active_presyn) *
            (2.0 * static_cast<double>(r.delay_span) - 1.0);
    r.ring_bits = mem_ring(r.post, r.delay_span, weight_bits);
    r.sharedq_bits = mem_sharedq(r.alpha, r.pre, r.delay_span, event_bits).bits;
    r.scdq_bits = mem_scdq(r.alpha, r.pre, r.delay_span, event_bits).bits;
    r.pushes = stats.pushes;
    r.deliveries = stats.deliveries;
    r.synaptic_ops = stats.deliveries * r.post;
    return r;
}

} // namespace dsnn
