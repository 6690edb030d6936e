#include <doctest.h>

#include <algorithm>
#include <map>
#include <utility>

#include "dsnn/core/dense.hpp"
#include "dsnn/core/error.hpp"
#include "dsnn/delayq/backends.hpp"
#include "dsnn/delayq/ring_buffer.hpp"
#include "dsnn/delayq/scdq.hpp"
#include "dsnn/delayq/shared_queue.hpp"
#include "dsnn/delayq/wvu.hpp"
#include "random_models.hpp"

using namespace dsnn;
using dsnn::testing::random_model;
using dsnn::testing::random_raster;
using dsnn::testing::RandomModelSpec;

namespace {

using Delivery = std::pair<std::uint32_t, int>;

std::vector<Delivery> sorted(std::vector<Delivery> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

// A -> C and B -> C with delays {0, 1, 2}; axons (A, 2), (B, 0), (B, 1) pruned.
DelayWeightTensor pruned_axon_example()
{
    DelayWeightTensor w(DelaySet({0, 1, 2}), 2, 1);
    w.set_weight(0, 0, 0, 0.5);
    w.set_weight(1, 0, 0, 0.5);
    w.set_weight(2, 1, 0, 0.5);
    return w;
}

DelayWeightTensor full_example()
{
    DelayWeightTensor w(DelaySet({0, 1, 2}), 2, 1);
    for (std::size_t d = 0; d < 3; ++d)
    {
        for (std::size_t i = 0; i < 2; ++i)
        {
            w.set_weight(d, i, 0, 1.0);
        }
    }
    return w;
}

} // namespace

TEST_CASE("WVU of the pruned-axon example")
{
    const auto wvu = wvu_build(pruned_axon_example());
    CHECK(wvu.get(0, 0));
    CHECK(wvu.get(0, 1));
    CHECK_FALSE(wvu.get(0, 2));
    CHECK_FALSE(wvu.get(1, 0));
    CHECK_FALSE(wvu.get(1, 1));
    CHECK(wvu.get(1, 2));
}

TEST_CASE("WVU leading zeros and residency of the pruned-axon example")
{
    const auto wvu = wvu_build(pruned_axon_example());
    CHECK(wvu.clz(0) == 1);  // A: [1,1,0] read with delay 2 as the MSB
    CHECK(wvu.clz(1) == 0);  // B: [0,0,1]
    CHECK(wvu_max_residency(wvu, 0) == 1);
    CHECK(wvu_max_residency(wvu, 1) == 2);

    // Events from A can leave at elapsed delay 1 (two timesteps in the
    // queue); events from B stay three timesteps.
    SharedCircularDelayQueue q(DelaySet({0, 1, 2}), wvu);
    q.push(0);
    q.push(1);
    std::size_t steps_with_a = 0, steps_with_b = 0;
    for (int t = 0; t < 5; ++t)
    {
        const auto prq = q.prq_events();
        steps_with_a += std::count_if(prq.begin(), prq.end(), [](auto e) { return e.source == 0; });
        steps_with_b += std::count_if(prq.begin(), prq.end(), [](auto e) { return e.source == 1; });
        q.end_of_timestep([](std::uint32_t, int) {});
    }
    CHECK(steps_with_a == 2);
    CHECK(steps_with_b == 3);
}

TEST_CASE("WVU of an all-zero tensor is empty and its events are dropped")
{
    DelayWeightTensor w(DelaySet({0, 2}), 3, 2);
    const auto wvu = wvu_build(w);
    for (std::size_t i = 0; i < 3; ++i)
    {
        CHECK(wvu.row_empty(i));
        CHECK(wvu_max_residency(wvu, i) == -1);
    }
    SharedCircularDelayQueue q(w.delays(), wvu);
    q.push(1);
    CHECK(q.occupancy() == 0);
    CHECK(q.stats().dropped == 1);
}

TEST_CASE("WVU matches a triple-loop recomputation")
{
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial)
    {
        const auto m = random_model(rng, {});
        for (const auto &w : m.connections)
        {
            const auto wvu = wvu_build(w);
            for (std::size_t i = 0; i < w.pre(); ++i)
            {
                for (std::size_t d = 0; d < w.num_levels(); ++d)
                {
                    bool any = false;
                    for (std::size_t j = 0; j < w.post(); ++j)
                    {
                        any = any || w.weight(d, i, j) != 0.0;
                    }
                    CHECK(wvu.get(i, d) == any);
                }
            }
        }
    }
}

TEST_CASE("WVU leading zeros on rows wider than one machine word")
{
    WvuMatrix wvu(1, 130);
    CHECK(wvu.clz(0) == 130);
    wvu.set(0, 3);
    CHECK(wvu.clz(0) == 126);
    wvu.set(0, 100);
    CHECK(wvu.clz(0) == 29);
    CHECK(wvu_max_residency(wvu, 0) == 100);
}

TEST_CASE("SCDQ deliveries over three timesteps")
{
    // A and B fire at t=0, B again at t=1, delays {0, 1, 2}.
    SharedCircularDelayQueue q(DelaySet({0, 1, 2}), wvu_build(full_example()));
    std::vector<Delivery> got;
    auto collect = [&](std::uint32_t s, int d) { got.emplace_back(s, d); };

    q.push(0);
    q.push(1);
    q.end_of_timestep(collect);
    CHECK(sorted(got) == std::vector<Delivery>{{0, 0}, {1, 0}});

    got.clear();
    q.push(1);
    q.end_of_timestep(collect);
    CHECK(sorted(got) == std::vector<Delivery>{{0, 1}, {1, 0}, {1, 1}});

    got.clear();
    q.end_of_timestep(collect);
    CHECK(sorted(got) == std::vector<Delivery>{{0, 2}, {1, 1}, {1, 2}});

    got.clear();
    q.end_of_timestep(collect);
    CHECK(sorted(got) == std::vector<Delivery>{{1, 2}});
    CHECK(q.occupancy() == 0);
}

TEST_CASE("SCDQ end of timestep on empty queues delivers nothing")
{
    SharedCircularDelayQueue q(DelaySet({0, 1}), WvuMatrix::all_ones(2, 2));
    int calls = 0;
    q.end_of_timestep([&](std::uint32_t, int) { ++calls; });
    CHECK(calls == 0);
    CHECK(q.occupancy() == 0);
    CHECK(q.prq_events().empty());
    CHECK(q.poq_events().empty());
}

TEST_CASE("SCDQ skips delays that are not levels of a strided set")
{
    DelayWeightTensor w(DelaySet({0, 2, 4}), 1, 1);
    w.set_weight(1, 0, 0, 1.0);
    w.set_weight(2, 0, 0, 1.0);
    SharedCircularDelayQueue q(w.delays(), wvu_build(w));
    q.push(0);
    std::vector<std::pair<int, int>> got;  // (t, delay)
    for (int t = 0; t < 6; ++t)
    {
        q.end_of_timestep([&](std::uint32_t, int d) { got.emplace_back(t, d); });
    }
    CHECK(got == std::vector<std::pair<int, int>>{{2, 2}, {4, 4}});
}

TEST_CASE("SCDQ capacity overflow reports the peak")
{
    SharedCircularDelayQueue q(DelaySet({0, 1}), WvuMatrix::all_ones(4, 2), 3);
    q.push(0);
    q.push(1);
    q.push(2);
    try
    {
        q.push(3);
        FAIL("expected overflow");
    }
    catch (const QueueOverflow &e)
    {
        CHECK(e.capacity() == 3);
        CHECK(e.peak_occupancy() == 3);
    }
}

TEST_CASE("SCDQ deliveries on random schedules match delayed spike visibility")
{
    Rng rng(22);
    for (int trial = 0; trial < 100; ++trial)
    {
        const std::size_t I = 1 + rng.below(16);
        const auto delays = dsnn::testing::random_delay_set(rng, 8);
        const std::size_t T = 1 + rng.below(32);
        WvuMatrix wvu(I, delays.size());
        for (std::size_t i = 0; i < I; ++i)
        {
            for (std::size_t d = 0; d < delays.size(); ++d)
            {
                wvu.set(i, d, rng.bernoulli(0.6));
            }
        }
        const auto raster = random_raster(rng, T, I, 0.3);
        SharedCircularDelayQueue q(delays, wvu);
        for (std::size_t t = 0; t < T; ++t)
        {
            for (std::size_t i = 0; i < I; ++i)
            {
                if (raster.at(t, i))
                {
                    q.push(static_cast<std::uint32_t>(i));
                }
            }
            std::vector<Delivery> got;
            q.end_of_timestep([&](std::uint32_t s, int d) { got.emplace_back(s, d); });

            std::vector<Delivery> expect;
            for (std::size_t k = 0; k < delays.size(); ++k)
            {
                const auto d = static_cast<std::size_t>(delays[k]);
                for (std::size_t i = 0; i < I; ++i)
                {
                    if (d <= t && raster.at(t - d, i) && wvu.get(i, k))
                    {
                        expect.emplace_back(static_cast<std::uint32_t>(i), delays[k]);
                    }
                }
            }
            CHECK(sorted(got) == sorted(expect));
        }
    }
}

TEST_CASE("SCDQ events never outlive their residency")
{
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial)
    {
        const std::size_t I = 1 + rng.below(8);
        const auto delays = dsnn::testing::random_delay_set(rng, 8);
        WvuMatrix wvu(I, delays.size());
        for (std::size_t i = 0; i < I; ++i)
        {
            for (std::size_t d = 0; d < delays.size(); ++d)
            {
                wvu.set(i, d, rng.bernoulli(0.5));
            }
        }
        SharedCircularDelayQueue q(delays, wvu);
        for (int t = 0; t < 20; ++t)
        {
            for (std::size_t i = 0; i < I; ++i)
            {
                if (rng.bernoulli(0.3))
                {
                    q.push(static_cast<std::uint32_t>(i));
                }
            }
            for (const auto &e : q.prq_events())
            {
                const int limit = wvu_max_residency(wvu, e.source);
                REQUIRE(limit >= 0);
                CHECK(static_cast<int>(e.counter) <= delays[static_cast<std::size_t>(limit)]);
                CHECK(static_cast<int>(e.counter) <= q.residency_limit(e.source));
            }
            q.end_of_timestep([](std::uint32_t, int) {});
        }
    }
}

TEST_CASE("ring buffer delivers a single spike exactly d steps later, once")
{
    for (int d : {0, 1, 3, 5})
    {
        DelayWeightTensor w(DelaySet({d}), 1, 1);
        w.set_weight(0, 0, 0, 0.75);
        RingBufferBank ring(w, static_cast<std::size_t>(d) + 1);
        std::vector<double> seen;
        for (int t = 0; t < 10; ++t)
        {
            const std::vector<std::uint8_t> spikes{static_cast<std::uint8_t>(t == 0 ? 1 : 0)};
            ring.accumulate(spikes);
            std::vector<double> current(1, 0.0);
            ring.drain(current);
            seen.push_back(current[0]);
        }
        for (int t = 0; t < 10; ++t)
        {
            CHECK(seen[static_cast<std::size_t>(t)] == (t == d ? 0.75 : 0.0));
        }
    }
}

TEST_CASE("ring buffer with zero weights keeps zero accumulators")
{
    DelayWeightTensor w(DelaySet({0, 2}), 2, 2);
    RingBufferBank ring(w, 3);
    const std::vector<std::uint8_t> spikes{1, 1};
    ring.accumulate(spikes);
    for (std::size_t j = 0; j < 2; ++j)
    {
        for (std::size_t s = 0; s < 3; ++s)
        {
            CHECK(ring.slot_value(j, s) == 0.0);
        }
    }
}

TEST_CASE("ring buffer rejects delays beyond its slots")
{
    DelayWeightTensor w(DelaySet({0, 4}), 1, 1);
    CHECK_THROWS_AS(RingBufferBank(w, 4), ConfigError);
    CHECK_NOTHROW(RingBufferBank(w, 5));
}

TEST_CASE("shared queue requires axonal delays unless multi-copy is enabled")
{
    const auto full = full_example();
    CHECK_THROWS_AS(SharedDelayQueue(full, false), ModelShapeError);
    CHECK_NOTHROW(SharedDelayQueue(full, true));
    CHECK(is_axonal(pruned_axon_example()) == false);
    DelayWeightTensor axonal(DelaySet({0, 1, 2}), 2, 1);
    axonal.set_weight(1, 0, 0, 1.0);
    axonal.set_weight(2, 1, 0, 1.0);
    CHECK(is_axonal(axonal));
    CHECK_NOTHROW(SharedDelayQueue(axonal, false));
}

TEST_CASE("shared queue in multi-copy mode delivers like the SCDQ")
{
    const auto w = full_example();
    SharedDelayQueue q(w, true);
    std::vector<Delivery> got;
    auto collect = [&](std::uint32_t s, int d) { got.emplace_back(s, d); };
    q.push(0);
    q.push(1);
    q.end_of_timestep(collect);
    CHECK(sorted(got) == std::vector<Delivery>{{0, 0}, {1, 0}});
    got.clear();
    q.push(1);
    q.end_of_timestep(collect);
    CHECK(sorted(got) == std::vector<Delivery>{{0, 1}, {1, 0}, {1, 1}});
    got.clear();
    q.end_of_timestep(collect);
    CHECK(sorted(got) == std::vector<Delivery>{{0, 2}, {1, 1}, {1, 2}});
}

TEST_CASE("parse_backend accepts the four backends only")
{
    CHECK(parse_backend("dense") == Backend::dense);
    CHECK(parse_backend("scdq") == Backend::scdq);
    CHECK(parse_backend("ring") == Backend::ring);
    CHECK(parse_backend("sharedq") == Backend::sharedq);
    CHECK_THROWS_AS(parse_backend("loihi"), ConfigError);
}

TEST_CASE("event-driven backends reproduce the dense executor bit for bit")
{
    Rng rng(24);
    for (int trial = 0; trial < 60; ++trial)
    {
        RandomModelSpec spec;
        spec.max_width = 10;
        spec.max_delay = 6;
        spec.timesteps = 1 + rng.below(24);
        const auto m = random_model(rng, spec);
        const auto r = random_raster(rng, m.num_timesteps, m.input_width(), 0.3);
        const auto ref = forward_dense(m, r);
        CHECK(bit_identical(ref, forward_scdq(m, r).trace));
        CHECK(bit_identical(ref, forward_ring(m, r).trace));
        BackendOptions multi;
        multi.multi_copy = true;
        CHECK(bit_identical(ref, forward_sharedq(m, r, multi).trace));

        spec.axonal = true;
        const auto ax = random_model(rng, spec);
        const auto ra = random_raster(rng, ax.num_timesteps, ax.input_width(), 0.3);
        CHECK(bit_identical(forward_dense(ax, ra), forward_sharedq(ax, ra).trace));
    }
}

TEST_CASE("zero raster leaves the SCDQ empty")
{
    Rng rng(25);
    const auto m = random_model(rng, {});
    const auto res = forward_scdq(m, SpikeRaster(m.num_timesteps, m.input_width()));
    for (const auto &q : res.queues)
    {
        CHECK(q.peak_occupancy == 0);
        CHECK(q.deliveries == 0);
    }
}

TEST_CASE("delay-free model on the shared queue behaves as plain feed-forward")
{
    Rng rng(26);
    RandomModelSpec spec;
    spec.max_delay = 0;
    for (int trial = 0; trial < 10; ++trial)
    {
        const auto m = random_model(rng, spec);
        const auto r = random_raster(rng, m.num_timesteps, m.input_width(), 0.4);
        CHECK(bit_identical(forward_dense(m, r), forward_sharedq(m, r).trace));
    }
}

TEST_CASE("WVU filtering preserves the trace and never adds deliveries")
{
    Rng rng(27);
    for (int trial = 0; trial < 40; ++trial)
    {
        RandomModelSpec spec;
        spec.mask_density = 0.4;
        const auto m = random_model(rng, spec);
        const auto r = random_raster(rng, m.num_timesteps, m.input_width(), 0.4);
        BackendOptions off;
        off.zero_skipping = false;
        const auto a = forward_scdq(m, r);
        const auto b = forward_scdq(m, r, off);
        CHECK(bit_identical(a.trace, b.trace));
        for (std::size_t l = 0; l < a.queues.size(); ++l)
        {
            CHECK(a.queues[l].deliveries <= b.queues[l].deliveries);
            CHECK(a.queues[l].peak_occupancy <= b.queues[l].peak_occupancy);
        }
    }
}

TEST_CASE("each event is delivered once per useful level within the horizon")
{
    Rng rng(28);
    for (int trial = 0; trial < 30; ++trial)
    {
        const auto m = random_model(rng, {});
        const auto r = random_raster(rng, m.num_timesteps, m.input_width(), 0.3);
        std::vector<DeliveryRecord> log;
        BackendOptions opts;
        opts.event_log = &log;
        const auto res = forward_scdq(m, r, opts);
        std::map<std::pair<std::size_t, std::uint32_t>, std::size_t> per_source;
        for (const auto &e : log)
        {
            ++per_source[{e.connection, e.source}];
        }
        for (std::size_t l = 0; l < m.num_layers(); ++l)
        {
            const auto &w = m.connections[l];
            const auto wvu = wvu_build(w);
            for (std::size_t i = 0; i < w.pre(); ++i)
            {
                std::size_t expect = 0;
                for (std::size_t t = 0; t < m.num_timesteps; ++t)
                {
                    const bool fired = l == 0 ? r.at(t, i) : res.trace.spike(l - 1, t, i);
                    if (!fired)
                    {
                        continue;
                    }
                    for (std::size_t k = 0; k < w.num_levels(); ++k)
                    {
                        if (wvu.get(i, k) &&
                                t + static_cast<std::size_t>(w.delays()[k]) < m.num_timesteps)
                        {
                            ++expect;
                        }
                    }
                }
                CHECK(per_source[{l, static_cast<std::uint32_t>(i)}] == expect);
            }
        }
    }
}

TEST_CASE("measured SCDQ peak occupancy respects the alpha * I * (2D - 1) bound")
{
    Rng rng(29);
    for (int trial = 0; trial < 50; ++trial)
    {
        RandomModelSpec spec;
        spec.max_delay = 8;
        spec.timesteps = 32;
        const auto m = random_model(rng, spec);
        const auto r = random_raster(rng, m.num_timesteps, m.input_width(), 0.5);
        const auto res = forward_scdq(m, r);
        for (std::size_t l = 0; l < m.num_layers(); ++l)
        {
            const auto &q = res.queues[l];
            const auto span = m.connections[l].delays().span();
            CHECK(q.peak_occupancy <= q.max_active_presyn * (2 * span - 1));
        }
    }
}

TEST_CASE("run_dataset returns results in dataset order for any thread count")
{
    Rng rng(30);
    const auto m = random_model(rng, {});
    Dataset data;
    for (int k = 0; k < 9; ++k)
    {
        data.push_back(random_raster(rng, m.num_timesteps, m.input_width(), 0.3));
    }
    const auto one = run_dataset(Backend::scdq, m, data, {}, 1);
    const auto three = run_dataset(Backend::scdq, m, data, {}, 3);
    REQUIRE(one.size() == data.size());
    for (std::size_t k = 0; k < data.size(); ++k)
    {
        CHECK(bit_identical(one[k].trace, three[k].trace));
        CHECK(bit_identical(one[k].trace, forward_dense(m, data[k])));
    }
}
