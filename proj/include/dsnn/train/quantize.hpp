#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dsnn/core/network.hpp"

namespace dsnn {

/// Round to the nearest bfloat16 value (8 exponent bits, 7 stored mantissa
/// bits), ties to even.
double bf16_round(double x);

/// Largest representable integer code for N bits: 2^(N-1) - 1.
int integer_qmax(int bits);

/// max|w| / qmax, or 1 for an all-zero tensor.
double integer_scale(std::span<const double> w, int bits);

/// clamp(round(w / scale), -qmax, qmax).
std::int32_t integer_code(double w, double scale, int bits);

/// Integer codes of a tensor quantized with `scale`.
std::vector<std::int8_t> integer_codes(std::span<const double> w, double scale, int bits);

/// Returns the model with every weight replaced by its dequantized value
/// under `spec`. Idempotent: a tensor already on the grid of its stored scale
/// is left untouched.
NetworkModel quantize(const NetworkModel &model, const QuantSpec &spec);

} // namespace dsnn
