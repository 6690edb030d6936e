#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace dsnn {

// std::mt19937_64's output sequence is fixed by the standard, but the
// <random> distributions are not. Everything derived here uses explicit
// arithmetic so seeded artifacts are byte-identical across toolchains.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n)
    {
        // Rejection sampling keeps the result unbiased.
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
        std::uint64_t x = engine_();
        while (x >= limit)
        {
            x = engine_();
        }
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T> &v)
    {
        for (std::size_t k = v.size(); k > 1; --k)
        {
            std::swap(v[k - 1], v[below(k)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace dsnn
