#include "dsnn/metrics/fidelity.hpp"

#include <algorithm>
#include <cmath>

#include "dsnn/core/error.hpp"

namespace dsnn {

namespace {

std::vector<std::vector<std::size_t>> confusion(const std::vector<SimTrace> &traces,
        const std::vector<int> &labels, std::size_t classes)
{
    std::vector<std::vector<std::size_t>> m(classes, std::vector<std::size_t>(classes, 0));
    for (std::size_t k = 0; k < traces.size(); ++k)
    {
        const int p = traces[k].prediction;
        if (labels[k] >= 0 && static_cast<std::size_t>(labels[k]) < classes && p >= 0 &&
                static_cast<std::size_t>(p) < classes)
        {
            ++m[static_cast<std::size_t>(labels[k])][static_cast<std::size_t>(p)];
        }
    }
    return m;
}

double accuracy(const std::vector<SimTrace> &traces, const std::vector<int> &labels)
{
    std::size_t hit = 0;
    for (std::size_t k = 0; k < traces.size(); ++k)
    {
        hit += traces[k].prediction == labels[k] ? 1 : 0;
    }
    return 100.0 * static_cast<double>(hit) / static_cast<double>(traces.size());
}

} // namespace

FidelityReport compare_traces(const std::vector<SimTrace> &reference,
        const std::vector<SimTrace> &test, const std::vector<int> &labels)
{
    if (reference.size() != test.size())
    {
        throw DimensionError("compare_traces: " + std::to_string(reference.size()) +
                " reference traces vs " + std::to_string(test.size()) + " test traces");
    }
    if (!labels.empty() && labels.size() != reference.size())
    {
        throw DimensionError("compare_traces: label count does not match trace count");
    }
    FidelityReport r;
    r.samples = reference.size();
    if (reference.empty())
    {
        return r;
    }

    const std::size_t layers = reference.front().layers.size();
    r.reference_spikes.assign(layers, 0.0);
    r.test_spikes.assign(layers, 0.0);
    r.vmem_rmse.assign(layers, 0.0);
    std::vector<double> vmem_points(layers, 0.0);
    std::size_t same = 0;

    for (std::size_t k = 0; k < reference.size(); ++k)
    {
        const SimTrace &a = reference[k];
        const SimTrace &b = test[k];
        if (a.layers.size() != layers || b.layers.size() != layers || a.timesteps != b.timesteps)
        {
            throw DimensionError("compare_traces: trace " + std::to_string(k) +
                    " has a different shape");
        }
        same += a.prediction == b.prediction ? 1 : 0;
        for (std::size_t l = 0; l < layers; ++l)
        {
            if (a.layers[l].width != b.layers[l].width)
            {
                throw DimensionError("compare_traces: layer width mismatch");
            }
            r.reference_spikes[l] += static_cast<double>(a.spike_count(l));
            r.test_spikes[l] += static_cast<double>(b.spike_count(l));
            const auto &va = a.layers[l].vmem;
            const auto &vb = b.layers[l].vmem;
            for (std::size_t e = 0; e < va.size(); ++e)
            {
                const double diff = va[e] - vb[e];
                r.vmem_rmse[l] += diff * diff;
            }
            vmem_points[l] += static_cast<double>(va.size());
        }
    }

    const auto n = static_cast<double>(reference.size());
    r.consistency = 100.0 * static_cast<double>(same) / n;
    for (std::size_t l = 0; l < layers; ++l)
    {
        r.reference_spikes[l] /= n;
        r.test_spikes[l] /= n;
        r.vmem_rmse[l] = vmem_points[l] > 0 ? std::sqrt(r.vmem_rmse[l] / vmem_points[l]) : 0.0;
    }
    if (!labels.empty())
    {
        const std::size_t classes = reference.front().layers.back().width;
        r.reference_accuracy = accuracy(reference, labels);
        r.test_accuracy = accuracy(test, labels);
        r.reference_confusion = confusion(reference, labels, classes);
        r.test_confusion = confusion(test, labels, classes);
    }
    return r;
}

} // namespace dsnn
