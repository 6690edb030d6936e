#include "dsnn/train/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "dsnn/core/dense.hpp"
#include "dsnn/core/error.hpp"
#include "dsnn/core/rng.hpp"
#include "dsnn/train/adam.hpp"
#include "dsnn/train/quantize.hpp"

namespace dsnn {

void TrainConfig::validate() const
{
    if (batch_size == 0)
    {
        throw ConfigError("batch size must be positive");
    }
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    {
        throw ConfigError("learning rate must be non-negative");
    }
    if (!(beta > 0.0))
    {
        throw ConfigError("surrogate slope must be positive");
    }
    if (stride <= 0 || max_delay < 0)
    {
        throw ConfigError("delay stride must be positive and max delay non-negative");
    }
    if (max_delay_limit && DelaySet::strided(max_delay, stride).max_delay() > *max_delay_limit)
    {
        throw ConfigError("initial delay set exceeds the platform max delay");
    }
    if (!(lr_gamma > 0.0 && lr_gamma <= 1.0))
    {
        throw ConfigError("lr_gamma must lie in (0, 1]");
    }
    if (!(weight_decay >= 0.0) || (weight_clip && !(*weight_clip > 0.0)))
    {
        throw ConfigError("weight decay must be non-negative and the weight clip positive");
    }
    if (prune_target.kind == PruneTarget::Kind::keep_fraction &&
            !(prune_target.value > 0.0 && prune_target.value <= 1.0))
    {
        throw ConfigError("keep fraction must lie in (0, 1]");
    }
    if (prune_target.kind == PruneTarget::Kind::levels)
    {
        const auto initial = DelaySet::strided(max_delay, stride).size();
        if (prune_target.value < 1.0 || prune_target.value > static_cast<double>(initial))
        {
            throw ConfigError("target delay levels must be between 1 and the initial count");
        }
    }
}

LossConfig TrainConfig::loss() const
{
    LossConfig c;
    c.mode = SpikeMode::hard;
    c.beta = beta;
    c.vmem_tiebreak = vmem_tiebreak;
    c.logit_scale = logit_scale;
    c.detach_reset = detach_reset;
    return c;
}

std::size_t resolve_threads(std::size_t requested)
{
    if (requested > 0)
    {
        return requested;
    }
    if (const char *env = std::getenv("DSNN_THREADS"))
    {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0)
        {
            return static_cast<std::size_t>(n);
        }
    }
    return 1;
}

void init_weights(NetworkModel &model, std::uint64_t seed, double gain)
{
    Rng rng(seed);
    for (auto &w : model.connections)
    {
        const double fan_in = static_cast<double>(w.num_levels() * w.pre());
        const double bound = gain / std::sqrt(fan_in);
        std::vector<double> values(w.size());
        for (auto &x : values)
        {
            x = rng.uniform(-bound, bound);
        }
        w.assign(values);
    }
    model.seed = seed;
}

namespace {

void constrain_weights(NetworkModel &model, double shrink, std::optional<double> clip)
{
    if (shrink == 1.0 && !clip)
    {
        return;
    }
    for (auto &w : model.connections)
    {
        std::vector<double> values(w.values().begin(), w.values().end());
        for (auto &x : values)
        {
            x *= shrink;
            if (clip)
            {
                x = std::clamp(x, -*clip, *clip);
            }
        }
        w.assign(values);
    }
}

// Runs fn(k) for k in [0, n) on `threads` workers; rethrows the first error.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn)
{
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1)
    {
        for (std::size_t k = 0; k < n; ++k)
        {
            fn(k);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w)
        {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < n; k = next++)
                {
                    try
                    {
                        fn(k);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(mutex);
                        if (!failure)
                        {
                            failure = std::current_exception();
                        }
                        next = n;
                    }
                }
            });
        }
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }
}

TrainResult train_epochs(const NetworkModel &initial, const Dataset &data,
        const TrainConfig &cfg, std::size_t epochs)
{
    cfg.validate();
    initial.validate();
    TrainResult result{initial, {}};
    if (epochs == 0 || data.empty())
    {
        return result;
    }
    for (const auto &r : data)
    {
        if (!r.label)
        {
            throw ConfigError("training data must be labelled");
        }
    }

    NetworkModel &model = result.model;
    const LossConfig loss_cfg = cfg.loss();
    const std::size_t threads = resolve_threads(cfg.threads);
    Adam adam(model, cfg.learning_rate);
    Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t batch = std::min(cfg.batch_size, data.size());
    std::vector<WeightGrads> per_sample(batch, zero_grads(model));
    std::vector<SampleResult> outcomes(batch);
    NetworkModel quantized;

    for (std::size_t epoch = 0; epoch < epochs; ++epoch)
    {
        if (cfg.lr_step > 0 && epoch > 0 && epoch % cfg.lr_step == 0)
        {
            adam.set_learning_rate(adam.learning_rate() * cfg.lr_gamma);
        }
        rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t correct = 0;
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < order.size(); start += batch, ++batch_index)
        {
            const std::size_t n = std::min(batch, order.size() - start);
            const NetworkModel *forward = &model;
            if (cfg.quant_aware)
            {
                quantized = quantize(model, *cfg.quant_aware);
                forward = &quantized;
            }
            parallel_for(n, threads, [&](std::size_t k) {
                for (auto &g : per_sample[k])
                {
                    std::fill(g.begin(), g.end(), 0.0);
                }
                outcomes[k] = sample_gradients(*forward, data[order[start + k]], loss_cfg,
                        per_sample[k]);
            });

            // Fixed-order reduction keeps results independent of thread count.
            WeightGrads total = zero_grads(model);
            double batch_loss = 0.0;
            for (std::size_t k = 0; k < n; ++k)
            {
                batch_loss += outcomes[k].loss;
                if (outcomes[k].prediction == *data[order[start + k]].label)
                {
                    ++correct;
                }
                for (std::size_t l = 0; l < total.size(); ++l)
                {
                    for (std::size_t e = 0; e < total[l].size(); ++e)
                    {
                        total[l][e] += per_sample[k][l][e];
                    }
                }
            }
            if (!std::isfinite(batch_loss))
            {
                throw DivergenceError(epoch, batch_index);
            }
            const double inv = 1.0 / static_cast<double>(n);
            for (auto &g : total)
            {
                for (auto &x : g)
                {
                    x *= inv;
                }
            }
            adam.step(model, total);
            constrain_weights(model, 1.0 - adam.learning_rate() * cfg.weight_decay, cfg.weight_clip);
            loss_sum += batch_loss;
        }
        result.log.push_back(EpochRecord{epoch,
                loss_sum / static_cast<double>(data.size()),
                100.0 * static_cast<double>(correct) / static_cast<double>(data.size())});
    }
    if (cfg.quant_aware)
    {
        model = quantize(model, *cfg.quant_aware);
    }
    return result;
}

} // namespace

TrainResult bptt_train(const NetworkModel &model, const Dataset &data, const TrainConfig &cfg)
{
    return train_epochs(model, data, cfg, cfg.epochs);
}

TrainResult finetune(const NetworkModel &model, const Dataset &data, const TrainConfig &cfg)
{
    return train_epochs(model, data, cfg, cfg.finetune_epochs);
}

double evaluate_accuracy(const NetworkModel &model, const Dataset &data, std::size_t threads)
{
    if (data.empty())
    {
        return 0.0;
    }
    std::vector<int> hit(data.size(), 0);
    parallel_for(data.size(), resolve_threads(threads), [&](std::size_t k) {
        hit[k] = (data[k].label && forward_dense(model, data[k]).prediction == *data[k].label) ? 1 : 0;
    });
    const auto correct = std::accumulate(hit.begin(), hit.end(), std::size_t{0});
    return 100.0 * static_cast<double>(correct) / static_cast<double>(data.size());
}

std::string format_epoch(const EpochRecord &r, const char *phase)
{
    std::ostringstream os;
    os.precision(17);
    os << "{\"phase\":\"" << phase << "\",\"epoch\":" << r.epoch << ",\"loss\":" << r.loss
       << ",\"accuracy\":" << r.accuracy << "}";
    return os.str();
}

} // namespace dsnn
