#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsnn {

/// Array shapes disagree (weights vs. layer widths, raster vs. model).
class DimensionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// A parameter or hardware constraint is violated.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// The model does not have the structure a backend requires
/// (e.g. per-synapse delays on an axonal-only shared queue).
class ModelShapeError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed, truncated or version-mismatched file contents.
class FormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class QueueOverflow : public std::runtime_error
{
public:
    QueueOverflow(std::size_t capacity, std::size_t peak)
            : std::runtime_error("delay queue overflow: capacity " +
                      std::to_string(capacity) + ", peak occupancy " +
                      std::to_string(peak))
            , capacity_(capacity)
            , peak_(peak)
    {
    }
    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t peak_occupancy() const noexcept { return peak_; }

private:
    std::size_t capacity_;
    std::size_t peak_;
};

class DivergenceError : public std::runtime_error
{
public:
    DivergenceError(std::size_t epoch, std::size_t batch)
            : std::runtime_error("training diverged (non-finite loss) at epoch " +
                      std::to_string(epoch) + ", batch " + std::to_string(batch))
            , epoch_(epoch)
            , batch_(batch)
    {
    }
    std::size_t epoch() const noexcept { return epoch_; }
    std::size_t batch_index() const noexcept { return batch_; }

private:
    std::size_t epoch_;
    std::size_t batch_;
};

} // namespace dsnn
