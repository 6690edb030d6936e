#include "dsnn/io/model_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "dsnn/core/error.hpp"
#include "dsnn/train/quantize.hpp"

namespace dsnn {

namespace {

using json = nlohmann::json;

constexpr char kMagic[8] = {'D', 'S', 'N', 'N', 'M', 'O', 'D', 'L'};

void put_u16(std::vector<std::uint8_t> &out, std::uint16_t v)
{
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v)
{
    for (int b = 0; b < 4; ++b)
    {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
    }
}

void put_f64(std::vector<std::uint8_t> &out, double x)
{
    const auto v = std::bit_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b)
    {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
    }
}

class Reader
{
public:
    explicit Reader(const std::vector<std::uint8_t> &bytes) : bytes_(bytes) {}

    const std::uint8_t *take(std::size_t n, const char *what)
    {
        if (bytes_.size() - pos_ < n)
        {
            throw FormatError(std::string("model file truncated while reading ") + what);
        }
        const std::uint8_t *p = bytes_.data() + pos_;
        pos_ += n;
        return p;
    }

    std::uint16_t u16(const char *what)
    {
        const auto *p = take(2, what);
        return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
    }

    std::uint32_t u32(const char *what)
    {
        const auto *p = take(4, what);
        std::uint32_t v = 0;
        for (int b = 3; b >= 0; --b)
        {
            v = (v << 8) | p[b];
        }
        return v;
    }

    double f64(const char *what)
    {
        const auto *p = take(8, what);
        std::uint64_t v = 0;
        for (int b = 7; b >= 0; --b)
        {
            v = (v << 8) | p[b];
        }
        return std::bit_cast<double>(v);
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    const std::vector<std::uint8_t> &bytes_;
    std::size_t pos_ = 0;
};

std::uint16_t bf16_bits(double x)
{
    const auto f = static_cast<float>(x);
    const auto bits = std::bit_cast<std::uint32_t>(f);
    if (static_cast<double>(f) != x || (bits & 0xFFFFu) != 0)
    {
        throw ConfigError("model weights are not representable in bfloat16; quantize first");
    }
    return static_cast<std::uint16_t>(bits >> 16);
}

double from_bf16_bits(std::uint16_t b)
{
    return static_cast<double>(std::bit_cast<float>(static_cast<std::uint32_t>(b) << 16));
}

double dequantize(std::int32_t code, double scale)
{
    return code == 0 ? 0.0 : code * scale;
}

std::size_t weight_blob_bytes(const QuantSpec &q, std::size_t n)
{
    switch (q.scheme)
    {
    case QuantScheme::float64:
        return 8 * n;
    case QuantScheme::bfloat16:
        return 2 * n;
    case QuantScheme::integer:
        return 8 + n;
    }
    return 0;
}

json header_of(const NetworkModel &m)
{
    json h;
    h["version"] = kModelFormatVersion;
    h["widths"] = m.widths;
    h["timesteps"] = m.num_timesteps;
    h["readout"] = to_string(m.readout);
    h["quant"] = m.quant.name();
    h["seed"] = m.seed;
    h["max_delay_limit"] = m.max_delay_limit ? json(*m.max_delay_limit) : json(nullptr);
    json neurons = json::array();
    for (const auto &n : m.neurons)
    {
        neurons.push_back({{"tau", n.tau}, {"threshold", n.threshold}});
    }
    h["neurons"] = neurons;
    json conns = json::array();
    for (const auto &c : m.connections)
    {
        std::vector<int> levels(c.delays().levels().begin(), c.delays().levels().end());
        conns.push_back({{"pre", c.pre()}, {"post", c.post()}, {"delays", levels},
                {"weight_bytes", weight_blob_bytes(m.quant, c.size())},
                {"mask_bytes", (c.size() + 7) / 8}});
    }
    h["connections"] = conns;
    if (m.quant.scheme != QuantScheme::integer)
    {
        h["scales"] = m.scales;
    }
    return h;
}

} // namespace

std::vector<std::uint8_t> serialize_model(const NetworkModel &model)
{
    model.validate();
    const std::string header = header_of(model).dump();
    std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
    put_u32(out, static_cast<std::uint32_t>(header.size()));
    out.insert(out.end(), header.begin(), header.end());

    for (std::size_t l = 0; l < model.connections.size(); ++l)
    {
        const DelayWeightTensor &c = model.connections[l];
        const auto values = c.values();
        switch (model.quant.scheme)
        {
        case QuantScheme::float64:
            for (double x : values)
            {
                put_f64(out, x);
            }
            break;
        case QuantScheme::bfloat16:
            for (double x : values)
            {
                put_u16(out, bf16_bits(x));
            }
            break;
        case QuantScheme::integer:
        {
            const double scale = model.scales.at(l);
            put_f64(out, scale);
            for (double x : values)
            {
                const auto code = integer_code(x, scale, model.quant.bits);
                if (dequantize(code, scale) != x)
                {
                    throw ConfigError("model weights are not on the integer grid of "
                                      "their scale; quantize first");
                }
                out.push_back(static_cast<std::uint8_t>(static_cast<std::int8_t>(code)));
            }
            break;
        }
        }
        const auto mask = c.mask();
        std::vector<std::uint8_t> bits((mask.size() + 7) / 8, 0);
        for (std::size_t k = 0; k < mask.size(); ++k)
        {
            if (mask[k])
            {
                bits[k / 8] |= static_cast<std::uint8_t>(1u << (k % 8));
            }
        }
        out.insert(out.end(), bits.begin(), bits.end());
    }
    return out;
}

NetworkModel deserialize_model(const std::vector<std::uint8_t> &bytes)
{
    Reader in(bytes);
    if (std::memcmp(in.take(8, "magic"), kMagic, 8) != 0)
    {
        throw FormatError("not a model file (bad magic)");
    }
    const std::uint32_t header_len = in.u32("header length");
    const auto *hp = reinterpret_cast<const char *>(in.take(header_len, "header"));
    json h;
    try
    {
        h = json::parse(hp, hp + header_len);
    }
    catch (const json::exception &e)
    {
        throw FormatError(std::string("model header is not valid JSON: ") + e.what());
    }

    NetworkModel m;
    try
    {
        const int version = h.at("version").get<int>();
        if (version != kModelFormatVersion)
        {
            throw FormatError("unsupported model format version " + std::to_string(version) +
                    " (expected " + std::to_string(kModelFormatVersion) + ")");
        }
        m.widths = h.at("widths").get<std::vector<std::size_t>>();
        m.num_timesteps = h.at("timesteps").get<std::size_t>();
        m.readout = parse_readout(h.at("readout").get<std::string>());
        m.quant = QuantSpec::parse(h.at("quant").get<std::string>());
        m.seed = h.at("seed").get<std::uint64_t>();
        if (!h.at("max_delay_limit").is_null())
        {
            m.max_delay_limit = h.at("max_delay_limit").get<int>();
        }
        for (const auto &n : h.at("neurons"))
        {
            m.neurons.push_back({n.at("tau").get<double>(), n.at("threshold").get<double>()});
        }
        if (m.quant.scheme != QuantScheme::integer)
        {
            m.scales = h.at("scales").get<std::vector<double>>();
        }

        for (const auto &cj : h.at("connections"))
        {
            const auto pre = cj.at("pre").get<std::size_t>();
            const auto post = cj.at("post").get<std::size_t>();
            DelayWeightTensor c(DelaySet(cj.at("delays").get<std::vector<int>>()), pre, post);
            const std::size_t n = c.size();
            if (cj.at("weight_bytes").get<std::size_t>() != weight_blob_bytes(m.quant, n) ||
                    cj.at("mask_bytes").get<std::size_t>() != (n + 7) / 8)
            {
                throw FormatError("connection blob size does not match its shape");
            }
            std::vector<double> values(n);
            switch (m.quant.scheme)
            {
            case QuantScheme::float64:
                for (auto &x : values)
                {
                    x = in.f64("weights");
                }
                break;
            case QuantScheme::bfloat16:
                for (auto &x : values)
                {
                    x = from_bf16_bits(in.u16("weights"));
                }
                break;
            case QuantScheme::integer:
            {
                const double scale = in.f64("scale");
                const auto *codes = in.take(n, "weights");
                for (std::size_t k = 0; k < n; ++k)
                {
                    values[k] = dequantize(static_cast<std::int8_t>(codes[k]), scale);
                }
                m.scales.push_back(scale);
                break;
            }
            }
            const auto *bits = in.take((n + 7) / 8, "mask");
            std::vector<std::uint8_t> mask(n);
            for (std::size_t k = 0; k < n; ++k)
            {
                mask[k] = (bits[k / 8] >> (k % 8)) & 1u;
            }
            c.restrict_mask(mask);
            c.assign(values);
            m.connections.push_back(std::move(c));
        }
    }
    catch (const json::exception &e)
    {
        throw FormatError(std::string("model header is missing fields: ") + e.what());
    }
    catch (const std::invalid_argument &e)
    {
        throw FormatError(std::string("model header is inconsistent: ") + e.what());
    }
    if (in.remaining() != 0)
    {
        throw FormatError("model file has " + std::to_string(in.remaining()) +
                " unexpected trailing bytes");
    }
    try
    {
        m.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw FormatError(std::string("model file shape mismatch: ") + e.what());
    }
    return m;
}

std::vector<std::uint8_t> read_file_bytes(const std::string &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
    {
        throw FormatError("cannot open '" + path + "'");
    }
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::string &path, const std::vector<std::uint8_t> &bytes)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
    {
        throw FormatError("cannot write '" + path + "'");
    }
    f.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f)
    {
        throw FormatError("write to '" + path + "' failed");
    }
}

void save_model(const NetworkModel &model, const std::string &path)
{
    write_file_bytes(path, serialize_model(model));
}

NetworkModel load_model(const std::string &path)
{
    return deserialize_model(read_file_bytes(path));
}

} // namespace dsnn
