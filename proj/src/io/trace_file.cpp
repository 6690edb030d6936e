#include "dsnn/io/trace_file.hpp"

#include <fstream>

#include <json.hpp>

#include "dsnn/core/error.hpp"

namespace dsnn {

using json = nlohmann::json;

void write_traces(std::ostream &os, const std::vector<SimTrace> &traces,
        const std::vector<int> &labels)
{
    for (std::size_t k = 0; k < traces.size(); ++k)
    {
        const SimTrace &tr = traces[k];
        json j;
        j["sample"] = k;
        j["label"] = k < labels.size() ? labels[k] : -1;
        j["prediction"] = tr.prediction;
        j["T"] = tr.timesteps;
        json layers = json::array();
        for (const auto &l : tr.layers)
        {
            layers.push_back({{"width", l.width}, {"spikes", l.spikes}, {"vmem", l.vmem}});
        }
        j["layers"] = layers;
        os << j.dump() << '\n';
    }
}

TraceSet read_traces(std::istream &is)
{
    TraceSet set;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line))
    {
        ++line_no;
        if (line.empty())
        {
            continue;
        }
        try
        {
            const json j = json::parse(line);
            SimTrace tr;
            tr.timesteps = j.at("T").get<std::size_t>();
            tr.prediction = j.at("prediction").get<int>();
            for (const auto &lj : j.at("layers"))
            {
                LayerTrace l;
                l.width = lj.at("width").get<std::size_t>();
                l.spikes = lj.at("spikes").get<std::vector<std::uint8_t>>();
                l.vmem = lj.at("vmem").get<std::vector<double>>();
                if (l.spikes.size() != l.width * tr.timesteps || l.vmem.size() != l.spikes.size())
                {
                    throw FormatError("trace line " + std::to_string(line_no) +
                            ": layer size does not match width * T");
                }
                tr.layers.push_back(std::move(l));
            }
            set.labels.push_back(j.at("label").get<int>());
            set.traces.push_back(std::move(tr));
        }
        catch (const json::exception &e)
        {
            throw FormatError("trace line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return set;
}

void save_traces(const std::string &path, const std::vector<SimTrace> &traces,
        const std::vector<int> &labels)
{
    std::ofstream f(path, std::ios::trunc);
    if (!f)
    {
        throw FormatError("cannot write '" + path + "'");
    }
    write_traces(f, traces, labels);
}

TraceSet load_traces(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
    {
        throw FormatError("cannot open '" + path + "'");
    }
    return read_traces(f);
}

} // namespace dsnn
