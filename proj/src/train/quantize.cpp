#include "dsnn/train/quantize.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <limits>

#include "dsnn/core/error.hpp"

namespace dsnn {

double bf16_round(double x)
{
    if (!std::isfinite(x) || x == 0.0)
    {
        return x;
    }
    // bfloat16 shares binary32's exponent range: normal numbers have an
    // 8-bit significand, subnormals a fixed quantum of 2^-133.
    int exp = 0;
    std::frexp(x, &exp);  // |x| = m * 2^exp, m in [0.5, 1)
    const int quantum_exp = std::max(exp - 8, -133);
    const double q = std::ldexp(1.0, quantum_exp);
    const double r = std::nearbyint(x / q) * q;  // default rounding: ties to even
    const double max_bf16 = std::ldexp(255.0 / 256.0, 128);
    if (std::abs(r) > max_bf16)
    {
        return std::copysign(std::numeric_limits<double>::infinity(), x);
    }
    return r == 0.0 ? 0.0 : r;
}

int integer_qmax(int bits)
{
    return (1 << (bits - 1)) - 1;
}

double integer_scale(std::span<const double> w, int bits)
{
    double peak = 0.0;
    for (double x : w)
    {
        peak = std::max(peak, std::abs(x));
    }
    return peak == 0.0 ? 1.0 : peak / integer_qmax(bits);
}

std::int32_t integer_code(double w, double scale, int bits)
{
    const double qmax = integer_qmax(bits);
    return static_cast<std::int32_t>(std::clamp(std::round(w / scale), -qmax, qmax));
}

std::vector<std::int8_t> integer_codes(std::span<const double> w, double scale, int bits)
{
    std::vector<std::int8_t> codes(w.size());
    for (std::size_t k = 0; k < w.size(); ++k)
    {
        codes[k] = static_cast<std::int8_t>(integer_code(w[k], scale, bits));
    }
    return codes;
}

namespace {

double dequantize(std::int32_t code, double scale)
{
    return code == 0 ? 0.0 : code * scale;
}

bool on_grid(std::span<const double> w, double scale, int bits)
{
    for (double x : w)
    {
        if (dequantize(integer_code(x, scale, bits), scale) != x)
        {
            return false;
        }
    }
    return true;
}

} // namespace

NetworkModel quantize(const NetworkModel &model, const QuantSpec &spec)
{
    model.validate();
    NetworkModel out = model;
    if (out.scales.size() != out.connections.size())
    {
        out.scales.assign(out.connections.size(), 1.0);
    }
    for (std::size_t l = 0; l < out.connections.size(); ++l)
    {
        DelayWeightTensor &w = out.connections[l];
        std::vector<double> values(w.values().begin(), w.values().end());
        switch (spec.scheme)
        {
        case QuantScheme::float64:
            out.scales[l] = 1.0;
            break;
        case QuantScheme::bfloat16:
            for (auto &x : values)
            {
                x = bf16_round(x);
            }
            out.scales[l] = 1.0;
            break;
        case QuantScheme::integer:
        {
            const bool keep_scale = model.quant == spec && on_grid(values, model.scales[l], spec.bits);
            const double scale = keep_scale ? model.scales[l] : integer_scale(values, spec.bits);
            for (auto &x : values)
            {
                x = dequantize(integer_code(x, scale, spec.bits), scale);
            }
            out.scales[l] = scale;
            break;
        }
        }
        w.assign(values);
    }
    out.quant = spec;
    return out;
}

} // namespace dsnn
