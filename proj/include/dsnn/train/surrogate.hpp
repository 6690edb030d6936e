#pragma once

namespace dsnn {

/// Fast-sigmoid surrogate derivative of the spike function,
/// 1 / (beta * |v| + 1)^2, with v = u - u_th. Used in the backward pass only.
double surrogate_grad(double v, double beta);

/// Smooth spike function used by the gradient-check mode:
/// 0.5 * (1 + beta * v / (1 + beta * |v|)), taking values in (0, 1).
double soft_spike(double v, double beta);

/// Exact derivative of soft_spike, which is 0.5 * beta * surrogate_grad.
double soft_spike_grad(double v, double beta);

} // namespace dsnn
