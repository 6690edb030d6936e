#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsnn/core/delay_set.hpp"
#include "dsnn/core/lif.hpp"
#include "dsnn/core/weights.hpp"

namespace dsnn {

/// How the output layer's trace is turned into a class.
enum class ReadoutKind
{
    /// argmax of output spike counts over the window; ties go to the
    /// larger final membrane potential, then to the lower index.
    spike_count,
    /// argmax over neurons of the peak membrane potential in the window.
    max_membrane,
};

std::string to_string(ReadoutKind kind);
ReadoutKind parse_readout(const std::string &name);

enum class QuantScheme
{
    float64,
    bfloat16,
    integer,
};

/// Deployment weight precision. Integer schemes are symmetric per tensor.
struct QuantSpec
{
    QuantScheme scheme = QuantScheme::float64;
    int bits = 64;  ///< 2..8 for integer, 16 for bfloat16, 64 for float64

    static QuantSpec float64() { return {}; }
    static QuantSpec bfloat16() { return {QuantScheme::bfloat16, 16}; }
    static QuantSpec integer(int bits);

    /// "float64", "bf16", "int8" ... "int2".
    static QuantSpec parse(const std::string &name);
    std::string name() const;

    bool operator==(const QuantSpec &) const = default;
};

/// Feed-forward LIF network whose projections carry per-synapse delays.
///
/// widths[0] is the input width; layer l >= 1 is computed from
/// connections[l - 1] and has neurons[l - 1] parameters. The input projection
/// is delay-free ({0}) by construction.
struct NetworkModel
{
    std::vector<std::size_t> widths;
    std::vector<DelayWeightTensor> connections;
    std::vector<NeuronParams> neurons;
    std::size_t num_timesteps = 0;
    ReadoutKind readout = ReadoutKind::spike_count;
    QuantSpec quant;
    /// Per-connection dequantization scale; 1.0 unless quant is integer.
    std::vector<double> scales;
    std::uint64_t seed = 0;
    /// Platform limit on the largest delay level, if any.
    std::optional<int> max_delay_limit;

    std::size_t num_layers() const noexcept { return connections.size(); }
    std::size_t input_width() const { return widths.front(); }
    std::size_t output_width() const { return widths.back(); }

    /// Count of mask-surviving weights.
    std::size_t parameter_count() const;

    /// Throws DimensionError / ConfigError on any broken invariant.
    void validate() const;

    /// Bitwise equality of every field.
    bool identical(const NetworkModel &other) const;
};

struct NetworkSpec
{
    std::vector<std::size_t> widths;
    /// Delay levels of every projection after the input one.
    DelaySet delays;
    NeuronParams neuron;
    std::size_t num_timesteps = 0;
    ReadoutKind readout = ReadoutKind::spike_count;
    std::optional<int> max_delay_limit;
};

/// Zero-weight, fully-connected model with the given shape.
NetworkModel make_network(const NetworkSpec &spec);

} // namespace dsnn
