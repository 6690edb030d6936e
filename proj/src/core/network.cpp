#include "dsnn/core/network.hpp"

#include <bit>
#include <stdexcept>

#include "dsnn/core/error.hpp"

namespace dsnn {

std::string to_string(ReadoutKind kind)
{
    switch (kind)
    {
    case ReadoutKind::spike_count:
        return "spike_count";
    case ReadoutKind::max_membrane:
        return "max_membrane";
    }
    return "unknown";
}

ReadoutKind parse_readout(const std::string &name)
{
    if (name == "spike_count" || name == "count")
    {
        return ReadoutKind::spike_count;
    }
    if (name == "max_membrane" || name == "vmem")
    {
        return ReadoutKind::max_membrane;
    }
    throw ConfigError("unknown readout '" + name + "'");
}

QuantSpec QuantSpec::integer(int bits)
{
    if (bits < 2 || bits > 8)
    {
        throw ConfigError("integer quantization supports 2..8 bits, got " +
                std::to_string(bits));
    }
    return {QuantScheme::integer, bits};
}

QuantSpec QuantSpec::parse(const std::string &name)
{
    if (name == "float64" || name == "fp64")
    {
        return float64();
    }
    if (name == "bf16" || name == "bfloat16")
    {
        return bfloat16();
    }
    if (name.size() == 4 && name.rfind("int", 0) == 0 && name[3] >= '2' && name[3] <= '8')
    {
        return integer(name[3] - '0');
    }
    throw ConfigError("unknown quantization scheme '" + name + "'");
}

std::string QuantSpec::name() const
{
    switch (scheme)
    {
    case QuantScheme::float64:
        return "float64";
    case QuantScheme::bfloat16:
        return "bf16";
    case QuantScheme::integer:
        return "int" + std::to_string(bits);
    }
    return "unknown";
}

std::size_t NetworkModel::parameter_count() const
{
    std::size_t n = 0;
    for (const auto &c : connections)
    {
        n += c.active_count();
    }
    return n;
}

void NetworkModel::validate() const
{
    if (widths.size() < 2)
    {
        throw DimensionError("model needs an input and at least one computed layer");
    }
    for (auto w : widths)
    {
        if (w == 0)
        {
            throw DimensionError("layer widths must be positive");
        }
    }
    const std::size_t layers = widths.size() - 1;
    if (connections.size() != layers || neurons.size() != layers)
    {
        throw DimensionError("model needs one connection and one neuron group per layer");
    }
    if (!scales.empty() && scales.size() != layers)
    {
        throw DimensionError("model needs one quantization scale per connection");
    }
    if (num_timesteps == 0)
    {
        throw ConfigError("num_timesteps must be positive");
    }
    for (std::size_t l = 0; l < layers; ++l)
    {
        const auto &c = connections[l];
        if (c.pre() != widths[l] || c.post() != widths[l + 1])
        {
            throw DimensionError("connection " + std::to_string(l) +
                    " does not match layer widths");
        }
        neurons[l].validate();
        if (max_delay_limit && c.delays().max_delay() > *max_delay_limit)
        {
            throw ConfigError("connection " + std::to_string(l) + " uses delay " +
                    std::to_string(c.delays().max_delay()) + " above the platform limit " +
                    std::to_string(*max_delay_limit));
        }
    }
    if (!(connections.front().delays() == DelaySet{}))
    {
        throw ConfigError("the input projection must be delay-free ({0})");
    }
}

bool NetworkModel::identical(const NetworkModel &other) const
{
    if (widths != other.widths || neurons != other.neurons ||
            num_timesteps != other.num_timesteps || readout != other.readout ||
            !(quant == other.quant) || seed != other.seed ||
            max_delay_limit != other.max_delay_limit ||
            connections.size() != other.connections.size() ||
            scales.size() != other.scales.size())
    {
        return false;
    }
    for (std::size_t l = 0; l < connections.size(); ++l)
    {
        if (!connections[l].identical(other.connections[l]))
        {
            return false;
        }
    }
    for (std::size_t l = 0; l < scales.size(); ++l)
    {
        if (std::bit_cast<std::uint64_t>(scales[l]) !=
                std::bit_cast<std::uint64_t>(other.scales[l]))
        {
            return false;
        }
    }
    return true;
}

NetworkModel make_network(const NetworkSpec &spec)
{
    NetworkModel model;
    model.widths = spec.widths;
    model.num_timesteps = spec.num_timesteps;
    model.readout = spec.readout;
    model.max_delay_limit = spec.max_delay_limit;
    if (spec.widths.size() < 2)
    {
        throw DimensionError("make_network: need at least two layer widths");
    }
    const std::size_t layers = spec.widths.size() - 1;
    for (std::size_t l = 0; l < layers; ++l)
    {
        model.connections.emplace_back(l == 0 ? DelaySet{} : spec.delays,
                spec.widths[l], spec.widths[l + 1]);
        model.neurons.push_back(spec.neuron);
    }
    model.scales.assign(layers, 1.0);
    model.validate();
    return model;
}

} // namespace dsnn
