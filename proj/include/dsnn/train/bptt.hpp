#pragma once

#include <cstddef>
#include <vector>

#include "dsnn/core/network.hpp"
#include "dsnn/core/raster.hpp"

namespace dsnn {

enum class SpikeMode
{
    /// Heaviside forward, surrogate derivative backward (training).
    hard,
    /// soft_spike forward and its exact derivative backward, so the
    /// analytic gradient can be checked against finite differences.
    soft,
};

struct LossConfig
{
    SpikeMode mode = SpikeMode::hard;
    double beta = 10.0;
    /// Weight of the final membrane potential added to each spike-count logit.
    double vmem_tiebreak = 0.01;
    /// Multiplies every logit before the softmax.
    double logit_scale = 1.0;
    /// Stop gradients through the reset gate's dependence on the spike.
    bool detach_reset = false;
};

/// Per-connection weight gradients, laid out like DelayWeightTensor::values().
using WeightGrads = std::vector<std::vector<double>>;

WeightGrads zero_grads(const NetworkModel &model);

struct SampleResult
{
    double loss = 0.0;
    int prediction = -1;
};

/// Forward pass and cross-entropy loss of one labelled raster.
SampleResult sample_loss(const NetworkModel &model, const SpikeRaster &raster,
        const LossConfig &cfg);

/// Forward + backward through time. Adds dLoss/dw into `grads`; masked
/// synapses receive exactly zero.
SampleResult sample_gradients(const NetworkModel &model, const SpikeRaster &raster,
        const LossConfig &cfg, WeightGrads &grads);

} // namespace dsnn
