#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dsnn/core/network.hpp"
#include "dsnn/core/raster.hpp"
#include "dsnn/core/trace.hpp"
#include "dsnn/delayq/scdq.hpp"

namespace dsnn {

enum class Backend
{
    dense,
    scdq,
    ring,
    sharedq,
};

std::string to_string(Backend b);
/// Throws ConfigError on unknown names.
Backend parse_backend(const std::string &name);

/// One delivered (timestep, connection, source, delay) record.
struct DeliveryRecord
{
    std::size_t t = 0;
    std::size_t connection = 0;
    std::uint32_t source = 0;
    int delay = 0;

    bool operator==(const DeliveryRecord &) const = default;
};

struct BackendOptions
{
    /// SCDQ: apply the WVU pruning filter (false = all-ones matrix).
    bool zero_skipping = true;
    /// SCDQ: hard event capacity per queue; unbounded when empty.
    std::optional<std::size_t> capacity;
    /// Ring buffer: slots per neuron; defaults to max delay + 1.
    std::optional<std::size_t> ring_slots;
    /// Shared queue: enqueue one copy per useful axon of per-synapse models.
    bool multi_copy = false;
    /// When set, every delivery is appended here.
    std::vector<DeliveryRecord> *event_log = nullptr;
};

struct RunResult
{
    SimTrace trace;
    /// One entry per connection (empty for the dense executor).
    std::vector<QueueStats> queues;
};

RunResult forward_scdq(const NetworkModel &model, const SpikeRaster &raster,
        const BackendOptions &options = {});
RunResult forward_ring(const NetworkModel &model, const SpikeRaster &raster,
        const BackendOptions &options = {});
RunResult forward_sharedq(const NetworkModel &model, const SpikeRaster &raster,
        const BackendOptions &options = {});

RunResult run_backend(Backend backend, const NetworkModel &model,
        const SpikeRaster &raster, const BackendOptions &options = {});

/// Runs every raster of a dataset on `threads` worker threads sharing the
/// immutable model. Results are in dataset order. Event logging is not
/// supported here.
std::vector<RunResult> run_dataset(Backend backend, const NetworkModel &model,
        const Dataset &data, BackendOptions options = {}, std::size_t threads = 1);

/// Line-oriented event log: "<connection> <t> <source> <delay>".
void write_event_log(std::ostream &os, const std::vector<DeliveryRecord> &log);

} // namespace dsnn
