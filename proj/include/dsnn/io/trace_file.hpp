#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dsnn/core/trace.hpp"

namespace dsnn {

/// One JSON object per line per sample:
///   {"sample":k,"label":l,"prediction":p,"T":..,"layers":[{"width":w,
///    "spikes":[...],"vmem":[...]}, ...]}
/// vmem values are written with round-trip precision.
void write_traces(std::ostream &os, const std::vector<SimTrace> &traces,
        const std::vector<int> &labels);

struct TraceSet
{
    std::vector<SimTrace> traces;
    std::vector<int> labels;  ///< -1 where unknown
};

/// Throws FormatError on malformed input.
TraceSet read_traces(std::istream &is);

void save_traces(const std::string &path, const std::vector<SimTrace> &traces,
        const std::vector<int> &labels);
TraceSet load_traces(const std::string &path);

} // namespace dsnn
