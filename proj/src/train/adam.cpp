#include "dsnn/train/adam.hpp"

#include <cmath>

#include "dsnn/core/error.hpp"

namespace dsnn {

Adam::Adam(const NetworkModel &model, double learning_rate, double beta1, double beta2,
        double epsilon)
        : lr_(learning_rate)
        , beta1_(beta1)
        , beta2_(beta2)
        , eps_(epsilon)
        , m_(zero_grads(model))
        , v_(zero_grads(model))
{
}

void Adam::step(NetworkModel &model, const WeightGrads &grads)
{
    if (grads.size() != m_.size())
    {
        throw DimensionError("Adam: gradient shape does not match optimizer state");
    }
    if (lr_ == 0.0)
    {
        ++t_;
        return;
    }
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t l = 0; l < grads.size(); ++l)
    {
        DelayWeightTensor &w = model.connections[l];
        const auto mask = w.mask();
        std::vector<double> next(w.values().begin(), w.values().end());
        for (std::size_t k = 0; k < next.size(); ++k)
        {
            if (!mask[k])
            {
                continue;
            }
            const double g = grads[l][k];
            m_[l][k] = beta1_ * m_[l][k] + (1.0 - beta1_) * g;
            v_[l][k] = beta2_ * v_[l][k] + (1.0 - beta2_) * g * g;
            const double mhat = m_[l][k] / c1;
            const double vhat = v_[l][k] / c2;
            next[k] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
        w.assign(next);
    }
}

} // namespace dsnn
