#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dsnn/core/network.hpp"

namespace dsnn {

/// Current on-disk format version.
inline constexpr int kModelFormatVersion = 1;

/// Container layout (all integers little-endian):
///   "DSNNMODL"  8-byte magic
///   u32         header length
///   header      compact JSON (version, widths, delays, neurons, quant, ...)
///   per connection: weight blob then mask bitset (LSB first)
/// Weight blobs hold f64 values, bf16 bit patterns (u16), or an f64 scale
/// followed by i8 codes, according to the model's QuantSpec.
std::vector<std::uint8_t> serialize_model(const NetworkModel &model);
NetworkModel deserialize_model(const std::vector<std::uint8_t> &bytes);

void save_model(const NetworkModel &model, const std::string &path);
NetworkModel load_model(const std::string &path);

/// Reads an entire file; throws FormatError if it cannot be opened.
std::vector<std::uint8_t> read_file_bytes(const std::string &path);
void write_file_bytes(const std::string &path, const std::vector<std::uint8_t> &bytes);

} // namespace dsnn
