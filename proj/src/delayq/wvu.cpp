#include "dsnn/delayq/wvu.hpp"

#include <bit>

namespace dsnn {

WvuMatrix::WvuMatrix(std::size_t pre, std::size_t levels)
        : pre_(pre)
        , levels_(levels)
        , words_per_row_((levels + 63) / 64)
        , words_(pre * words_per_row_, 0)
{
}

WvuMatrix WvuMatrix::all_ones(std::size_t pre, std::size_t levels)
{
    WvuMatrix m(pre, levels);
    for (std::size_t i = 0; i < pre; ++i)
    {
        for (std::size_t d = 0; d < levels; ++d)
        {
            m.set(i, d);
        }
    }
    return m;
}

void WvuMatrix::set(std::size_t i, std::size_t level, bool value)
{
    std::uint64_t &word = words_[i * words_per_row_ + level / 64];
    const std::uint64_t bit = std::uint64_t{1} << (level % 64);
    word = value ? (word | bit) : (word & ~bit);
}

bool WvuMatrix::row_empty(std::size_t i) const
{
    for (std::size_t k = 0; k < words_per_row_; ++k)
    {
        if (words_[i * words_per_row_ + k] != 0)
        {
            return false;
        }
    }
    return true;
}

std::size_t WvuMatrix::row_popcount(std::size_t i) const
{
    std::size_t n = 0;
    for (std::size_t k = 0; k < words_per_row_; ++k)
    {
        n += static_cast<std::size_t>(std::popcount(words_[i * words_per_row_ + k]));
    }
    return n;
}

std::size_t WvuMatrix::clz(std::size_t i) const
{
    std::size_t zeros = 0;
    for (std::size_t k = words_per_row_; k-- > 0;)
    {
        // Only the low `valid` bits of the top word belong to the row.
        const std::size_t valid = (k + 1 == words_per_row_) ? levels_ - 64 * k : 64;
        const std::uint64_t word = words_[i * words_per_row_ + k];
        if (word == 0)
        {
            zeros += valid;
            continue;
        }
        return zeros + static_cast<std::size_t>(std::countl_zero(word)) - (64 - valid);
    }
    return zeros;
}

WvuMatrix wvu_build(const DelayWeightTensor &w)
{
    WvuMatrix m(w.pre(), w.num_levels());
    for (std::size_t level = 0; level < w.num_levels(); ++level)
    {
        for (std::size_t i = 0; i < w.pre(); ++i)
        {
            for (double x : w.row(level, i))
            {
                if (x != 0.0)
                {
                    m.set(i, level);
                    break;
                }
            }
        }
    }
    return m;
}

int wvu_max_residency(const WvuMatrix &wvu, std::size_t i)
{
    if (wvu.row_empty(i))
    {
        return -1;
    }
    return static_cast<int>(wvu.levels() - 1 - wvu.clz(i));
}

} // namespace dsnn
