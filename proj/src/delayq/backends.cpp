#include "dsnn/delayq/backends.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "dsnn/core/dense.hpp"
#include "dsnn/core/error.hpp"
#include "dsnn/core/executor.hpp"
#include "dsnn/delayq/ring_buffer.hpp"
#include "dsnn/delayq/shared_queue.hpp"

namespace dsnn {

std::string to_string(Backend b)
{
    switch (b)
    {
    case Backend::dense:
        return "dense";
    case Backend::scdq:
        return "scdq";
    case Backend::ring:
        return "ring";
    case Backend::sharedq:
        return "sharedq";
    }
    return "unknown";
}

Backend parse_backend(const std::string &name)
{
    if (name == "dense")
    {
        return Backend::dense;
    }
    if (name == "scdq")
    {
        return Backend::scdq;
    }
    if (name == "ring")
    {
        return Backend::ring;
    }
    if (name == "sharedq")
    {
        return Backend::sharedq;
    }
    throw ConfigError("unknown backend '" + name + "' (expected dense, scdq, ring or sharedq)");
}

namespace {

std::size_t count_active(std::span<const std::uint8_t> presyn)
{
    std::size_t n = 0;
    for (auto s : presyn)
    {
        n += s;
    }
    return n;
}

// Adds w[level][source][*] into the postsynaptic currents for each delivery.
class DeliverySink
{
public:
    DeliverySink(const DelayWeightTensor &w, std::size_t connection,
            std::vector<DeliveryRecord> *log)
            : w_(&w)
            , level_of_delay_(w.delays().index_table())
            , connection_(connection)
            , log_(log)
    {
    }

    void deliver(std::size_t t, std::uint32_t source, int delay, std::span<double> current) const
    {
        const auto level = static_cast<std::size_t>(level_of_delay_[static_cast<std::size_t>(delay)]);
        const auto row = w_->row(level, source);
        for (std::size_t j = 0; j < row.size(); ++j)
        {
            current[j] += row[j];
        }
        if (log_)
        {
            log_->push_back(DeliveryRecord{t, connection_, source, delay});
        }
    }

private:
    const DelayWeightTensor *w_;
    std::vector<int> level_of_delay_;
    std::size_t connection_;
    std::vector<DeliveryRecord> *log_;
};

class ScdqProjection
{
public:
    ScdqProjection(const DelayWeightTensor &w, std::size_t connection, const BackendOptions &opt)
            : queue_(w.delays(),
                      opt.zero_skipping ? wvu_build(w) : WvuMatrix::all_ones(w.pre(), w.num_levels()),
                      opt.capacity)
            , sink_(w, connection, opt.event_log)
    {
    }

    void step(std::size_t t, std::span<const std::uint8_t> presyn, std::span<double> current)
    {
        queue_.note_active(count_active(presyn));
        for (std::size_t i = 0; i < presyn.size(); ++i)
        {
            if (presyn[i])
            {
                queue_.push(static_cast<std::uint32_t>(i));
            }
        }
        queue_.end_of_timestep([&](std::uint32_t source, int delay) {
            sink_.deliver(t, source, delay, current);
        });
    }

    const QueueStats &stats() const { return queue_.stats(); }

private:
    SharedCircularDelayQueue queue_;
    DeliverySink sink_;
};

class RingProjection
{
public:
    RingProjection(const DelayWeightTensor &w, const BackendOptions &opt)
            : bank_(w, opt.ring_slots.value_or(w.delays().span()))
            , levels_(w.num_levels())
    {
    }

    void step(std::size_t /*t*/, std::span<const std::uint8_t> presyn, std::span<double> current)
    {
        const std::size_t active = count_active(presyn);
        stats_.max_active_presyn = std::max(stats_.max_active_presyn, active);
        stats_.pushes += active;
        stats_.deliveries += active * levels_;
        bank_.accumulate(presyn);
        bank_.drain(current);
    }

    const QueueStats &stats() const { return stats_; }

private:
    RingBufferBank bank_;
    std::size_t levels_;
    QueueStats stats_;
};

class SharedQueueProjection
{
public:
    SharedQueueProjection(const DelayWeightTensor &w, std::size_t connection,
            const BackendOptions &opt)
            : queue_(w, opt.multi_copy)
            , sink_(w, connection, opt.event_log)
    {
    }

    void step(std::size_t t, std::span<const std::uint8_t> presyn, std::span<double> current)
    {
        queue_.note_active(count_active(presyn));
        for (std::size_t i = 0; i < presyn.size(); ++i)
        {
            if (presyn[i])
            {
                queue_.push(static_cast<std::uint32_t>(i));
            }
        }
        queue_.end_of_timestep([&](std::uint32_t source, int delay) {
            sink_.deliver(t, source, delay, current);
        });
    }

    const QueueStats &stats() const { return queue_.stats(); }

private:
    SharedDelayQueue queue_;
    DeliverySink sink_;
};

template <typename Projection>
RunResult collect(const NetworkModel &model, const SpikeRaster &raster,
        std::vector<Projection> &projections)
{
    RunResult result;
    result.trace = run_network(model, raster, std::span<Projection>(projections));
    for (const auto &p : projections)
    {
        result.queues.push_back(p.stats());
    }
    return result;
}

} // namespace

RunResult forward_scdq(const NetworkModel &model, const SpikeRaster &raster,
        const BackendOptions &options)
{
    model.validate();
    std::vector<ScdqProjection> projections;
    projections.reserve(model.num_layers());
    for (std::size_t l = 0; l < model.num_layers(); ++l)
    {
        projections.emplace_back(model.connections[l], l, options);
    }
    return collect(model, raster, projections);
}

RunResult forward_ring(const NetworkModel &model, const SpikeRaster &raster,
        const BackendOptions &options)
{
    model.validate();
    std::vector<RingProjection> projections;
    projections.reserve(model.num_layers());
    for (const auto &c : model.connections)
    {
        projections.emplace_back(c, options);
    }
    return collect(model, raster, projections);
}

RunResult forward_sharedq(const NetworkModel &model, const SpikeRaster &raster,
        const BackendOptions &options)
{
    model.validate();
    std::vector<SharedQueueProjection> projections;
    projections.reserve(model.num_layers());
    for (std::size_t l = 0; l < model.num_layers(); ++l)
    {
        projections.emplace_back(model.connections[l], l, options);
    }
    return collect(model, raster, projections);
}

RunResult run_backend(Backend backend, const NetworkModel &model, const SpikeRaster &raster,
        const BackendOptions &options)
{
    switch (backend)
    {
    case Backend::dense:
        return RunResult{forward_dense(model, raster), {}};
    case Backend::scdq:
        return forward_scdq(model, raster, options);
    case Backend::ring:
        return forward_ring(model, raster, options);
    case Backend::sharedq:
        return forward_sharedq(model, raster, options);
    }
    throw ConfigError("unknown backend");
}

std::vector<RunResult> run_dataset(Backend backend, const NetworkModel &model,
        const Dataset &data, BackendOptions options, std::size_t threads)
{
    options.event_log = nullptr;
    std::vector<RunResult> results(data.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t k = next++; k < data.size(); k = next++)
        {
            try
            {
                results[k] = run_backend(backend, model, data[k], options);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                {
                    failure = std::current_exception();
                }
                next = data.size();
            }
        }
    };

    threads = std::max<std::size_t>(1, std::min(threads, data.size()));
    if (threads == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> pool;
        for (std::size_t k = 0; k < threads; ++k)
        {
            pool.emplace_back(worker);
        }
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }
    return results;
}

void write_event_log(std::ostream &os, const std::vector<DeliveryRecord> &log)
{
    for (const auto &r : log)
    {
        os << r.connection << ' ' << r.t << ' ' << r.source << ' ' << r.delay << '\n';
    }
}

} // namespace dsnn
