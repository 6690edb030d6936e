#pragma once

#include <iosfwd>
#include <string>

#include "dsnn/core/raster.hpp"

namespace dsnn {

/// Text raster format. Each record is a JSON header line
///   {"T":64,"channels":700,"events":3,"label":4}
/// followed by `events` lines "t channel", sorted by t then channel without
/// duplicates. A dataset file is a sequence of records; "label" is optional.
void write_raster(std::ostream &os, const SpikeRaster &raster);
void write_dataset(std::ostream &os, const Dataset &data);

/// Throws FormatError on malformed, unsorted or out-of-range input.
Dataset read_dataset(std::istream &is);

void save_dataset(const Dataset &data, const std::string &path);
Dataset load_dataset(const std::string &path);

/// Labels of a dataset in order; -1 for unlabelled rasters.
std::vector<int> dataset_labels(const Dataset &data);

} // namespace dsnn
