#include "dsnn/metrics/report_json.hpp"

#include <json.hpp>

namespace dsnn {

using json = nlohmann::json;

std::string to_json(const FidelityReport &r)
{
    json j;
    j["samples"] = r.samples;
    j["consistency"] = r.consistency;
    j["reference_accuracy"] = r.reference_accuracy ? json(*r.reference_accuracy) : json(nullptr);
    j["test_accuracy"] = r.test_accuracy ? json(*r.test_accuracy) : json(nullptr);
    j["reference_spikes_per_layer"] = r.reference_spikes;
    j["test_spikes_per_layer"] = r.test_spikes;
    j["vmem_rmse_per_layer"] = r.vmem_rmse;
    j["reference_confusion"] = r.reference_confusion;
    j["test_confusion"] = r.test_confusion;
    return j.dump(2) + "\n";
}

std::string to_json(const std::vector<CostReport> &reports)
{
    json arr = json::array();
    for (const auto &r : reports)
    {
        arr.push_back({
                {"connection", r.connection},
                {"pre", r.pre},
                {"post", r.post},
                {"levels", r.levels},
                {"delay_span", r.delay_span},
                {"parameters", r.parameters},
                {"index_bits", r.index_bits},
                {"alpha", r.alpha},
                {"peak_occupancy", r.peak_occupancy},
                {"scdq_bound_events", r.scdq_bound_events},
                {"ring_bits", r.ring_bits},
                {"shared_queue_bits", r.sharedq_bits},
                {"scdq_bits", r.scdq_bits},
                {"pushes", r.pushes},
                {"deliveries", r.deliveries},
                {"synaptic_ops", r.synaptic_ops},
        });
    }
    return arr.dump(2) + "\n";
}

std::string to_json(const std::vector<PresetReport> &reports)
{
    json arr = json::array();
    for (const auto &r : reports)
    {
        arr.push_back({
                {"preset", r.preset.name},
                {"neurons", r.preset.neurons},
                {"delay_steps", r.preset.delay_steps},
                {"weight_bits", r.preset.weight_bits},
                {"event_bits", r.preset.event_bits},
                {"ring_buffer_bits", r.ring_bits},
                {"shared_queue_events", r.sharedq.events},
                {"shared_queue_bits", r.sharedq.bits},
                {"shared_queue_slot_sum_events", r.sharedq_summation.events},
                {"scdq_events", r.scdq.events},
                {"scdq_bits", r.scdq.bits},
                {"crossover_alpha", r.crossover},
                {"crossover_alpha_reported", r.crossover_reported},
        });
    }
    return arr.dump(2) + "\n";
}

} // namespace dsnn
