#pragma once

#include <cstddef>
#include <vector>

#include "dsnn/core/network.hpp"
#include "dsnn/train/bptt.hpp"

namespace dsnn {

class Adam
{
public:
    Adam(const NetworkModel &model, double learning_rate, double beta1 = 0.9,
            double beta2 = 0.999, double epsilon = 1e-8);

    /// One update from gradients `grads` (already averaged over the batch).
    /// Masked synapses are left at zero.
    void step(NetworkModel &model, const WeightGrads &grads);

    std::size_t steps() const noexcept { return t_; }
    double learning_rate() const noexcept { return lr_; }
    void set_learning_rate(double lr) noexcept { lr_ = lr; }

private:
    double lr_, beta1_, beta2_, eps_;
    std::size_t t_ = 0;
    WeightGrads m_, v_;
};

} // namespace dsnn
