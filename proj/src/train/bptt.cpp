#include "dsnn/train/bptt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsnn/core/error.hpp"
#include "dsnn/core/executor.hpp"
#include "dsnn/train/surrogate.hpp"

namespace dsnn {

WeightGrads zero_grads(const NetworkModel &model)
{
    WeightGrads g;
    g.reserve(model.connections.size());
    for (const auto &c : model.connections)
    {
        g.emplace_back(c.size(), 0.0);
    }
    return g;
}

namespace {

// Unrolled forward pass keeping every membrane potential and spike value.
struct Tape
{
    std::size_t timesteps = 0;
    std::vector<std::size_t> width;        // computed layers
    std::vector<std::vector<double>> u;    // [layer][t * width + n]
    std::vector<std::vector<double>> s;    // spike values (0/1 in hard mode)
    std::vector<double> input;             // raster as doubles [t * channels + c]
    std::vector<double> logits;
    std::vector<std::size_t> peak_step;    // max_membrane readout: argmax t per class

    const double *presyn(std::size_t layer, std::size_t t) const
    {
        return layer == 0 ? input.data() + t * input_width
                          : s[layer - 1].data() + t * width[layer - 1];
    }
    std::size_t input_width = 0;
};

Tape run_forward(const NetworkModel &model, const SpikeRaster &raster, const LossConfig &cfg)
{
    check_raster_shape(model, raster);
    Tape tape;
    tape.timesteps = model.num_timesteps;
    tape.input_width = model.input_width();
    tape.input.resize(raster.timesteps() * raster.channels());
    for (std::size_t t = 0; t < raster.timesteps(); ++t)
    {
        for (std::size_t c = 0; c < raster.channels(); ++c)
        {
            tape.input[t * raster.channels() + c] = raster.at(t, c) ? 1.0 : 0.0;
        }
    }

    const std::size_t layers = model.num_layers();
    const std::size_t T = model.num_timesteps;
    tape.width.assign(model.widths.begin() + 1, model.widths.end());
    tape.u.resize(layers);
    tape.s.resize(layers);
    for (std::size_t l = 0; l < layers; ++l)
    {
        tape.u[l].assign(T * tape.width[l], 0.0);
        tape.s[l].assign(T * tape.width[l], 0.0);
    }

    std::vector<double> current;
    for (std::size_t t = 0; t < T; ++t)
    {
        for (std::size_t l = 0; l < layers; ++l)
        {
            const DelayWeightTensor &w = model.connections[l];
            const std::size_t pre = w.pre();
            const std::size_t post = w.post();
            current.assign(post, 0.0);
            // Same accumulation order as the executors: levels descending,
            // presynaptic ascending.
            for (std::size_t level = w.num_levels(); level-- > 0;)
            {
                const auto d = static_cast<std::size_t>(w.delays()[level]);
                if (d > t)
                {
                    continue;
                }
                const double *x = tape.presyn(l, t - d);
                for (std::size_t i = 0; i < pre; ++i)
                {
                    if (x[i] == 0.0)
                    {
                        continue;
                    }
                    const auto row = w.row(level, i);
                    if (x[i] == 1.0)
                    {
                        for (std::size_t j = 0; j < post; ++j)
                        {
                            current[j] += row[j];
                        }
                    }
                    else
                    {
                        for (std::size_t j = 0; j < post; ++j)
                        {
                            current[j] += row[j] * x[i];
                        }
                    }
                }
            }

            const double decay = model.neurons[l].decay();
            const double th = model.neurons[l].threshold;
            double *u = tape.u[l].data() + t * post;
            double *s = tape.s[l].data() + t * post;
            for (std::size_t j = 0; j < post; ++j)
            {
                double prev_u = 0.0;
                double prev_s = 0.0;
                if (t > 0)
                {
                    prev_u = tape.u[l][(t - 1) * post + j];
                    prev_s = tape.s[l][(t - 1) * post + j];
                }
                if (cfg.mode == SpikeMode::hard)
                {
                    u[j] = prev_s != 0.0 ? current[j] : prev_u * decay + current[j];
                    s[j] = u[j] >= th ? 1.0 : 0.0;
                }
                else
                {
                    u[j] = prev_u * decay * (1.0 - prev_s) + current[j];
                    s[j] = soft_spike(u[j] - th, cfg.beta);
                }
            }
        }
    }

    const std::size_t classes = model.output_width();
    const std::size_t L = layers - 1;
    tape.logits.assign(classes, 0.0);
    if (model.readout == ReadoutKind::spike_count)
    {
        for (std::size_t k = 0; k < classes; ++k)
        {
            double count = 0.0;
            for (std::size_t t = 0; t < T; ++t)
            {
                count += tape.s[L][t * classes + k];
            }
            tape.logits[k] = cfg.logit_scale *
                    (count + cfg.vmem_tiebreak * tape.u[L][(T - 1) * classes + k]);
        }
    }
    else
    {
        tape.peak_step.assign(classes, 0);
        for (std::size_t k = 0; k < classes; ++k)
        {
            double peak = tape.u[L][k];
            for (std::size_t t = 1; t < T; ++t)
            {
                if (tape.u[L][t * classes + k] > peak)
                {
                    peak = tape.u[L][t * classes + k];
                    tape.peak_step[k] = t;
                }
            }
            tape.logits[k] = cfg.logit_scale * peak;
        }
    }
    return tape;
}

int tape_prediction(const NetworkModel &model, const Tape &tape)
{
    // Hard-mode tapes carry exactly the executor's spikes and potentials.
    SimTrace trace;
    trace.timesteps = tape.timesteps;
    const std::size_t L = tape.u.size() - 1;
    LayerTrace out;
    out.width = tape.width[L];
    out.vmem = tape.u[L];
    out.spikes.resize(tape.s[L].size());
    for (std::size_t k = 0; k < out.spikes.size(); ++k)
    {
        out.spikes[k] = tape.s[L][k] >= 0.5 ? 1 : 0;
    }
    trace.layers.push_back(std::move(out));
    return readout_prediction(trace, model.readout);
}

// Cross-entropy; fills dL/dlogit.
double cross_entropy(const std::vector<double> &logits, int label, std::vector<double> &grad)
{
    const double top = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double x : logits)
    {
        z += std::exp(x - top);
    }
    const double log_z = top + std::log(z);
    grad.resize(logits.size());
    for (std::size_t k = 0; k < logits.size(); ++k)
    {
        grad[k] = std::exp(logits[k] - log_z);
    }
    grad[static_cast<std::size_t>(label)] -= 1.0;
    return log_z - logits[static_cast<std::size_t>(label)];
}

int checked_label(const NetworkModel &model, const SpikeRaster &raster)
{
    if (!raster.label || *raster.label < 0 ||
            static_cast<std::size_t>(*raster.label) >= model.output_width())
    {
        throw DimensionError("training raster needs a label in [0, output width)");
    }
    return *raster.label;
}

} // namespace

SampleResult sample_loss(const NetworkModel &model, const SpikeRaster &raster,
        const LossConfig &cfg)
{
    const int label = checked_label(model, raster);
    const Tape tape = run_forward(model, raster, cfg);
    std::vector<double> grad;
    return {cross_entropy(tape.logits, label, grad), tape_prediction(model, tape)};
}

SampleResult sample_gradients(const NetworkModel &model, const SpikeRaster &raster,
        const LossConfig &cfg, WeightGrads &grads)
{
    const int label = checked_label(model, raster);
    if (grads.size() != model.connections.size())
    {
        throw DimensionError("gradient buffer does not match the model");
    }
    const Tape tape = run_forward(model, raster, cfg);
    std::vector<double> dlogit;
    const double loss = cross_entropy(tape.logits, label, dlogit);

    const std::size_t layers = model.num_layers();
    const std::size_t T = model.num_timesteps;
    const std::size_t L = layers - 1;
    const std::size_t classes = model.output_width();

    std::vector<std::vector<double>> gu(layers), gs(layers);
    for (std::size_t l = 0; l < layers; ++l)
    {
        gu[l].assign(T * tape.width[l], 0.0);
        gs[l].assign(T * tape.width[l], 0.0);
    }
    if (model.readout == ReadoutKind::spike_count)
    {
        for (std::size_t k = 0; k < classes; ++k)
        {
            const double g = cfg.logit_scale * dlogit[k];
            for (std::size_t t = 0; t < T; ++t)
            {
                gs[L][t * classes + k] += g;
            }
            gu[L][(T - 1) * classes + k] += g * cfg.vmem_tiebreak;
        }
    }
    else
    {
        for (std::size_t k = 0; k < classes; ++k)
        {
            gu[L][tape.peak_step[k] * classes + k] += cfg.logit_scale * dlogit[k];
        }
    }

    std::vector<double> gi;
    for (std::size_t t = T; t-- > 0;)
    {
        for (std::size_t l = layers; l-- > 0;)
        {
            const DelayWeightTensor &w = model.connections[l];
            const std::size_t pre = w.pre();
            const std::size_t post = w.post();
            const double decay = model.neurons[l].decay();
            const double th = model.neurons[l].threshold;
            double *gu_t = gu[l].data() + t * post;
            const double *gs_t = gs[l].data() + t * post;
            const double *u_t = tape.u[l].data() + t * post;

            for (std::size_t j = 0; j < post; ++j)
            {
                const double v = u_t[j] - th;
                const double ds = cfg.mode == SpikeMode::hard ? surrogate_grad(v, cfg.beta)
                                                              : soft_spike_grad(v, cfg.beta);
                gu_t[j] += gs_t[j] * ds;
            }
            if (t > 0)
            {
                const double *u_prev = tape.u[l].data() + (t - 1) * post;
                const double *s_prev = tape.s[l].data() + (t - 1) * post;
                double *gu_prev = gu[l].data() + (t - 1) * post;
                double *gs_prev = gs[l].data() + (t - 1) * post;
                for (std::size_t j = 0; j < post; ++j)
                {
                    gu_prev[j] += gu_t[j] * decay * (1.0 - s_prev[j]);
                    if (!cfg.detach_reset)
                    {
                        gs_prev[j] -= gu_t[j] * decay * u_prev[j];
                    }
                }
            }

            // The synaptic current received the whole of dL/du.
            gi.assign(gu_t, gu_t + post);
            auto &gw = grads[l];
            for (std::size_t level = 0; level < w.num_levels(); ++level)
            {
                const auto d = static_cast<std::size_t>(w.delays()[level]);
                if (d > t)
                {
                    continue;
                }
                const double *x = tape.presyn(l, t - d);
                double *gs_pre = (l > 0) ? gs[l - 1].data() + (t - d) * pre : nullptr;
                for (std::size_t i = 0; i < pre; ++i)
                {
                    const std::size_t base = w.index(level, i, 0);
                    if (x[i] != 0.0)
                    {
                        for (std::size_t j = 0; j < post; ++j)
                        {
                            gw[base + j] += gi[j] * x[i];
                        }
                    }
                    if (gs_pre)
                    {
                        const auto row = w.row(level, i);
                        double acc = 0.0;
                        for (std::size_t j = 0; j < post; ++j)
                        {
                            acc += row[j] * gi[j];
                        }
                        gs_pre[i] += acc;
                    }
                }
            }
        }
    }

    for (std::size_t l = 0; l < layers; ++l)
    {
        const auto mask = model.connections[l].mask();
        for (std::size_t k = 0; k < mask.size(); ++k)
        {
            if (!mask[k])
            {
                grads[l][k] = 0.0;
            }
        }
    }
    return {loss, tape_prediction(model, tape)};
}

} // namespace dsnn
