#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dsnn/core/network.hpp"
#include "dsnn/core/raster.hpp"
#include "dsnn/train/bptt.hpp"
#include "dsnn/train/prune.hpp"

namespace dsnn {

struct TrainConfig
{
    std::size_t epochs = 30;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    /// Step decay: the rate is multiplied by lr_gamma every lr_step epochs (0: off).
    std::size_t lr_step = 0;
    double lr_gamma = 0.5;
    double beta = 10.0;               ///< surrogate slope
    int max_delay = 12;               ///< initial delay set {0, s, ...} below max_delay
    int stride = 2;
    PruneMode prune_mode = PruneMode::synapse;
    PruneTarget prune_target = PruneTarget::keep_fraction(1.0);
    std::size_t finetune_epochs = 10;
    std::size_t refine_rounds = 0;    ///< extra train/prune rounds with local refinement
    std::uint64_t seed = 1;
    std::size_t threads = 0;          ///< 0: DSNN_THREADS or 1
    double init_gain = 1.0;
    double vmem_tiebreak = 0.01;
    double logit_scale = 1.0;
    bool detach_reset = false;
    std::optional<int> max_delay_limit;
    /// Decoupled L2 decay: after each update w *= (1 - learning_rate * weight_decay).
    double weight_decay = 0.0;
    /// Platform weight range: weights are clamped to [-clip, clip] after each update.
    std::optional<double> weight_clip;
    /// When set, forward passes use weights quantized to this spec while
    /// updates go to the full-precision copy (straight-through), and the
    /// result is quantized. Used for hardware-aware fine-tuning.
    std::optional<QuantSpec> quant_aware;

    void validate() const;
    LossConfig loss() const;
};

struct EpochRecord
{
    std::size_t epoch = 0;
    double loss = 0.0;
    double accuracy = 0.0;  ///< training accuracy over the epoch, percent
};

struct TrainResult
{
    NetworkModel model;
    std::vector<EpochRecord> log;
};

/// Thread count: `requested` if nonzero, else DSNN_THREADS, else 1.
std::size_t resolve_threads(std::size_t requested);

/// Uniform(-a, a) weights with a = gain / sqrt(fan_in), fan_in counting every
/// (delay, presynaptic) input of a neuron.
void init_weights(NetworkModel &model, std::uint64_t seed, double gain);

/// Minibatch BPTT with Adam over `data` for cfg.epochs epochs.
/// Throws DivergenceError on a non-finite batch loss.
TrainResult bptt_train(const NetworkModel &model, const Dataset &data, const TrainConfig &cfg);

/// bptt_train for cfg.finetune_epochs epochs on the surviving synapses.
TrainResult finetune(const NetworkModel &model, const Dataset &data, const TrainConfig &cfg);

/// Percentage of rasters whose dense-executor prediction equals the label.
double evaluate_accuracy(const NetworkModel &model, const Dataset &data, std::size_t threads = 1);

/// One line of the training log: {"epoch":..,"loss":..,"accuracy":..}.
std::string format_epoch(const EpochRecord &r, const char *phase);

} // namespace dsnn
