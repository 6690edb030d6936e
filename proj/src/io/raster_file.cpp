#include "dsnn/io/raster_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dsnn/core/error.hpp"

namespace dsnn {

using json = nlohmann::json;

void write_raster(std::ostream &os, const SpikeRaster &raster)
{
    json h;
    h["T"] = raster.timesteps();
    h["channels"] = raster.channels();
    h["events"] = raster.spike_count();
    if (raster.label)
    {
        h["label"] = *raster.label;
    }
    os << h.dump() << '\n';
    for (std::size_t t = 0; t < raster.timesteps(); ++t)
    {
        for (std::size_t c = 0; c < raster.channels(); ++c)
        {
            if (raster.at(t, c))
            {
                os << t << ' ' << c << '\n';
            }
        }
    }
}

void write_dataset(std::ostream &os, const Dataset &data)
{
    for (const auto &r : data)
    {
        write_raster(os, r);
    }
}

Dataset read_dataset(std::istream &is)
{
    Dataset data;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string &msg) {
        throw FormatError("raster line " + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(is, line))
    {
        ++line_no;
        if (line.empty())
        {
            continue;
        }
        json h;
        try
        {
            h = json::parse(line);
        }
        catch (const json::exception &)
        {
            fail("expected a JSON record header");
        }
        std::size_t T = 0, channels = 0, events = 0;
        std::optional<int> label;
        try
        {
            T = h.at("T").get<std::size_t>();
            channels = h.at("channels").get<std::size_t>();
            events = h.at("events").get<std::size_t>();
            if (h.contains("label") && !h["label"].is_null())
            {
                label = h["label"].get<int>();
            }
        }
        catch (const json::exception &e)
        {
            fail(std::string("bad record header: ") + e.what());
        }
        SpikeRaster r(T, channels);
        r.label = label;
        long long prev_t = -1, prev_c = -1;
        for (std::size_t e = 0; e < events; ++e)
        {
            if (!std::getline(is, line))
            {
                ++line_no;
                fail("record truncated: expected " + std::to_string(events) + " events");
            }
            ++line_no;
            std::istringstream ls(line);
            long long t = -1, c = -1;
            std::string rest;
            if (!(ls >> t >> c) || (ls >> rest))
            {
                fail("expected 't channel'");
            }
            if (t < 0 || c < 0 || static_cast<std::size_t>(t) >= T ||
                    static_cast<std::size_t>(c) >= channels)
            {
                fail("event out of range");
            }
            if (t < prev_t || (t == prev_t && c <= prev_c))
            {
                fail("events must be sorted by t then channel without duplicates");
            }
            prev_t = t;
            prev_c = c;
            r.set(static_cast<std::size_t>(t), static_cast<std::size_t>(c));
        }
        data.push_back(std::move(r));
    }
    return data;
}

void save_dataset(const Dataset &data, const std::string &path)
{
    std::ofstream f(path, std::ios::trunc);
    if (!f)
    {
        throw FormatError("cannot write '" + path + "'");
    }
    write_dataset(f, data);
}

Dataset load_dataset(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
    {
        throw FormatError("cannot open '" + path + "'");
    }
    return read_dataset(f);
}

std::vector<int> dataset_labels(const Dataset &data)
{
    std::vector<int> labels;
    labels.reserve(data.size());
    for (const auto &r : data)
    {
        labels.push_back(r.label.value_or(-1));
    }
    return labels;
}

} // namespace dsnn
