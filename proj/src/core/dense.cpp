#include "dsnn/core/dense.hpp"

#include <string>
#include <vector>

#include "dsnn/core/executor.hpp"

namespace dsnn {

void check_raster_shape(const NetworkModel &model, const SpikeRaster &raster)
{
    if (raster.timesteps() != model.num_timesteps || raster.channels() != model.input_width())
    {
        throw DimensionError("raster shape [" + std::to_string(raster.timesteps()) + "][" +
                std::to_string(raster.channels()) + "] does not match model [" +
                std::to_string(model.num_timesteps) + "][" +
                std::to_string(model.input_width()) + "]");
    }
}

namespace {

class DenseProjection
{
public:
    explicit DenseProjection(const DelayWeightTensor &w)
            : w_(&w)
            , depth_(w.delays().span())
            , history_(depth_ * w.pre(), 0)
    {
    }

    void step(std::size_t t, std::span<const std::uint8_t> presyn, std::span<double> current)
    {
        const DelayWeightTensor &w = *w_;
        const std::size_t pre = w.pre();
        std::copy(presyn.begin(), presyn.end(), history_.begin() + (t % depth_) * pre);

        for (std::size_t level = w.num_levels(); level-- > 0;)
        {
            const auto d = static_cast<std::size_t>(w.delays()[level]);
            if (d > t)
            {
                continue;  // before stimulus onset
            }
            const std::uint8_t *past = history_.data() + ((t - d) % depth_) * pre;
            for (std::size_t i = 0; i < pre; ++i)
            {
                if (!past[i])
                {
                    continue;
                }
                const auto row = w.row(level, i);
                for (std::size_t j = 0; j < row.size(); ++j)
                {
                    current[j] += row[j];
                }
            }
        }
    }

private:
    const DelayWeightTensor *w_;
    std::size_t depth_;
    std::vector<std::uint8_t> history_;  // ring of the last depth_ steps
};

} // namespace

SimTrace forward_dense(const NetworkModel &model, const SpikeRaster &raster)
{
    model.validate();
    std::vector<DenseProjection> projections;
    projections.reserve(model.connections.size());
    for (const auto &c : model.connections)
    {
        projections.emplace_back(c);
    }
    return run_network(model, raster, std::span<DenseProjection>(projections));
}

} // namespace dsnn
