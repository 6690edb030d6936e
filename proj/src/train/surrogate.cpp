#include "dsnn/train/surrogate.hpp"

#include <cmath>

namespace dsnn {

double surrogate_grad(double v, double beta)
{
    const double a = beta * std::abs(v) + 1.0;
    return 1.0 / (a * a);
}

double soft_spike(double v, double beta)
{
    return 0.5 * (1.0 + beta * v / (1.0 + beta * std::abs(v)));
}

double soft_spike_grad(double v, double beta)
{
    return 0.5 * beta * surrogate_grad(v, beta);
}

} // namespace dsnn
