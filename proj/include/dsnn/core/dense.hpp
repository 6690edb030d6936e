#pragma once

#include "dsnn/core/network.hpp"
#include "dsnn/core/raster.hpp"
#include "dsnn/core/trace.hpp"

namespace dsnn {

/// Reference executor: evaluates the delayed synaptic sum directly from a
/// spike history of depth max-delay + 1 for every projection. All queue
/// backends are checked bit-for-bit against this.
SimTrace forward_dense(const NetworkModel &model, const SpikeRaster &raster);

} // namespace dsnn
