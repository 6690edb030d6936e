// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
// nonzero if any gating criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dsnn/core/dense.hpp"
#include "dsnn/delayq/backends.hpp"
#include "dsnn/delayq/wvu.hpp"
#include "dsnn/io/model_file.hpp"
#include "dsnn/io/raster_file.hpp"
#include "dsnn/io/synthetic.hpp"
#include "dsnn/metrics/memory_cost.hpp"
#include "dsnn/train/bptt.hpp"
#include "dsnn/train/prune.hpp"
#include "dsnn/train/quantize.hpp"
#include "dsnn/train/trainer.hpp"
#include "random_models.hpp"

namespace fs = std::filesystem;
using namespace dsnn;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and budgets.
constexpr int kSuiteModels = 200;
constexpr double kSuiteSeconds = 60.0;
constexpr double kGradRelTol = 1e-4;
// Gradient entries below this magnitude (both analytic and numeric) are
// compared by absolute error instead; finite differences cannot resolve a
// relative error there.
constexpr double kGradFloor = 1e-6;
constexpr double kGradAbsTol = 1e-10;
constexpr double kPipelineMinAccuracy = 90.0;
constexpr double kControlGap = 15.0;
constexpr double kPipelineSeconds = 600.0;
constexpr double kQuantMaxDrop = 3.0;
constexpr double kShdMinAccuracy = 80.0;

int failures = 0;

void report(int id, bool pass, const std::string &what, const std::string &detail)
{
    std::cout << (pass ? "PASS" : "FAIL") << "  [" << id << "] " << what << "  (" << detail
              << ")" << std::endl;
    failures += pass ? 0 : 1;
}

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x, int precision = 2)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << x;
    return os.str();
}

// ---------------------------------------------------------------------------
// 1, 3 (suite part), 7

struct SuiteResult
{
    int models = 0;
    int scdq_mismatch = 0;
    int ring_mismatch = 0;
    int axonal_models = 0;
    int sharedq_mismatch = 0;
    int wvu_trace_mismatch = 0;
    int wvu_more_deliveries = 0;
    std::size_t wvu_saved = 0;
    int bound_violations = 0;
    std::size_t connections = 0;
    double worst_bound_ratio = 0.0;
    double seconds = 0.0;
};

SuiteResult run_suite()
{
    SuiteResult s;
    const auto start = Clock::now();
    Rng rng(20240101);
    for (int k = 0; k < kSuiteModels; ++k)
    {
        testing::RandomModelSpec spec;
        spec.max_width = 16;
        spec.max_delay = 8;
        spec.max_layers = 3;
        spec.timesteps = 1 + rng.below(32);
        spec.mask_density = rng.uniform(0.2, 1.0);
        spec.axonal = k % 2 == 1;
        const auto m = testing::random_model(rng, spec);
        const auto r = testing::random_raster(rng, m.num_timesteps, m.input_width(),
                rng.uniform(0.05, 0.6));
        ++s.models;

        const SimTrace ref = forward_dense(m, r);
        const RunResult scdq = forward_scdq(m, r);
        s.scdq_mismatch += bit_identical(ref, scdq.trace) ? 0 : 1;
        s.ring_mismatch += bit_identical(ref, forward_ring(m, r).trace) ? 0 : 1;
        if (spec.axonal)
        {
            ++s.axonal_models;
            s.sharedq_mismatch += bit_identical(ref, forward_sharedq(m, r).trace) ? 0 : 1;
        }

        BackendOptions unfiltered;
        unfiltered.zero_skipping = false;
        const RunResult raw = forward_scdq(m, r, unfiltered);
        s.wvu_trace_mismatch += bit_identical(scdq.trace, raw.trace) ? 0 : 1;
        for (std::size_t l = 0; l < m.num_layers(); ++l)
        {
            const auto &q = scdq.queues[l];
            if (q.deliveries > raw.queues[l].deliveries)
            {
                ++s.wvu_more_deliveries;
            }
            else
            {
                s.wvu_saved += raw.queues[l].deliveries - q.deliveries;
            }
            const auto span = m.connections[l].delays().span();
            const double bound = static_cast<double>(q.max_active_presyn) *
                    (2.0 * static_cast<double>(span) - 1.0);
            ++s.connections;
            if (static_cast<double>(q.peak_occupancy) > bound)
            {
                ++s.bound_violations;
            }
            if (bound > 0)
            {
                s.worst_bound_ratio =
                        std::max(s.worst_bound_ratio, static_cast<double>(q.peak_occupancy) / bound);
            }
        }
    }
    s.seconds = seconds_since(start);
    return s;
}

// ---------------------------------------------------------------------------
// 2

void check_memory_numbers()
{
    const auto tn = preset_report(truenorth_preset());
    const auto lo = preset_report(loihi_preset());
    const auto sp = preset_report(spinnaker_preset());
    const bool ok = tn.sharedq.events == 34816.0 && tn.scdq.events == 7936.0 &&
            lo.ring_bits == 24576.0 && lo.scdq.bits == 97536.0 &&
            std::abs(lo.crossover - 0.252) < 5e-4 && lo.crossover_reported == 0.25 &&
            sp.ring_bits == 65536.0 && sp.scdq.bits == 126976.0 &&
            std::abs(sp.crossover - 0.516) < 5e-4 && sp.crossover_reported == 0.5;
    std::ostringstream d;
    d << "truenorth " << tn.sharedq.events << " vs " << tn.scdq.events << " events; loihi "
      << lo.ring_bits << " vs " << lo.scdq.bits << " bits, crossover " << fmt(lo.crossover, 3)
      << " -> " << lo.crossover_reported << "; spinnaker " << sp.ring_bits << " vs "
      << sp.scdq.bits << " bits, crossover " << fmt(sp.crossover, 3) << " -> "
      << sp.crossover_reported;
    report(2, ok, "memory overhead numbers", d.str());
}

// ---------------------------------------------------------------------------
// 3

void check_wvu(const SuiteResult &s)
{
    DelayWeightTensor w(DelaySet({0, 1, 2}), 2, 1);
    w.set_weight(0, 0, 0, 0.5);
    w.set_weight(1, 0, 0, 0.5);
    w.set_weight(2, 1, 0, 0.5);
    const WvuMatrix wvu = wvu_build(w);
    const bool rows = wvu.get(0, 0) && wvu.get(0, 1) && !wvu.get(0, 2) && !wvu.get(1, 0) &&
            !wvu.get(1, 1) && wvu.get(1, 2);
    const std::size_t clz_a = wvu.clz(0), clz_b = wvu.clz(1);
    const bool ok = rows && clz_a == 1 && clz_b == 0 && s.wvu_trace_mismatch == 0 &&
            s.wvu_more_deliveries == 0;
    std::ostringstream d;
    d << "clz(A)=" << clz_a << " clz(B)=" << clz_b << "; " << s.models << " models, "
      << s.wvu_trace_mismatch << " trace changes, " << s.wvu_more_deliveries
      << " connections with extra deliveries, " << s.wvu_saved << " deliveries filtered";
    report(3, ok, "WVU filter preserves semantics", d.str());
}

// ---------------------------------------------------------------------------
// 4

void check_gradients()
{
    const auto start = Clock::now();
    NetworkSpec spec;
    spec.widths = {4, 3, 2};
    spec.delays = DelaySet({0, 1, 2});
    spec.neuron = NeuronParams{2.0, 1.0};
    spec.num_timesteps = 8;
    LossConfig cfg;
    cfg.mode = SpikeMode::soft;
    Rng rng(404);
    double worst = 0.0;
    std::size_t entries = 0, floored = 0;
    bool ok = true;
    for (int trial = 0; trial < 5; ++trial)
    {
        NetworkModel m = make_network(spec);
        init_weights(m, 40 + static_cast<std::uint64_t>(trial), 2.0);
        SpikeRaster r = testing::random_raster(rng, 8, 4, 0.5);
        r.label = trial % 2;
        WeightGrads grads = zero_grads(m);
        sample_gradients(m, r, cfg, grads);
        for (std::size_t l = 0; l < m.num_layers(); ++l)
        {
            const auto values = m.connections[l].values();
            for (std::size_t k = 0; k < values.size(); ++k)
            {
                const double h = 1e-5;
                std::vector<double> vp(values.begin(), values.end()), vm = vp;
                vp[k] += h;
                vm[k] -= h;
                NetworkModel plus = m, minus = m;
                plus.connections[l].assign(vp);
                minus.connections[l].assign(vm);
                const double numeric =
                        (sample_loss(plus, r, cfg).loss - sample_loss(minus, r, cfg).loss) / (2 * h);
                const double analytic = grads[l][k];
                const double scale = std::max(std::abs(numeric), std::abs(analytic));
                ++entries;
                if (scale < kGradFloor)
                {
                    ++floored;
                    ok = ok && std::abs(numeric - analytic) < kGradAbsTol;
                    continue;
                }
                const double rel = std::abs(numeric - analytic) / scale;
                worst = std::max(worst, rel);
                ok = ok && rel < kGradRelTol;
            }
        }
    }
    std::ostringstream d;
    d << entries << " entries over 5 nets, max rel error " << std::scientific
      << std::setprecision(2) << worst << ", " << floored << " near-zero entries, "
      << std::fixed << seconds_since(start) << " s";
    report(4, ok, "soft-mode gradient vs finite differences", d.str());
}

// ---------------------------------------------------------------------------
// 5, 6

struct PipelineConfig
{
    CoincidenceSpec task{32, {2, 6, 10}, 3, 0.01};
    std::size_t train_n = 600, test_n = 600;
    std::uint64_t train_seed = 11, test_seed = 12;
    std::vector<std::size_t> widths{2, 32, 32, 3};
    std::vector<std::size_t> control_widths{2, 56, 56, 3};
    int max_delay = 12, stride = 2;
    std::size_t keep_levels = 3;
    std::uint64_t seed = 1;
};

TrainConfig base_config(std::uint64_t seed)
{
    TrainConfig cfg;
    cfg.batch_size = 32;
    cfg.weight_clip = 2.0;
    cfg.seed = seed;
    cfg.threads = 1;
    return cfg;
}

TrainConfig train_config(std::uint64_t seed)
{
    TrainConfig cfg = base_config(seed);
    cfg.epochs = 60;
    cfg.learning_rate = 0.01;
    cfg.lr_step = 20;
    return cfg;
}

TrainConfig finetune_config(std::uint64_t seed)
{
    TrainConfig cfg = base_config(seed);
    cfg.finetune_epochs = 30;
    cfg.learning_rate = 0.003;
    cfg.lr_step = 10;
    return cfg;
}

TrainConfig quant_aware_config(std::uint64_t seed, const QuantSpec &q)
{
    TrainConfig cfg = base_config(seed);
    cfg.finetune_epochs = 15;
    cfg.learning_rate = 0.001;
    cfg.lr_step = 5;
    cfg.quant_aware = q;
    return cfg;
}

NetworkModel fresh_model(const std::vector<std::size_t> &widths, const DelaySet &delays,
        std::uint64_t seed)
{
    NetworkSpec spec;
    spec.widths = widths;
    spec.delays = delays;
    spec.neuron = NeuronParams{1.0, 1.0};
    spec.num_timesteps = 32;
    NetworkModel m = make_network(spec);
    init_weights(m, seed, 1.0);
    return m;
}

std::size_t active_parameters(const NetworkModel &m)
{
    std::size_t n = 0;
    for (const auto &w : m.connections)
    {
        n += w.active_count();
    }
    return n;
}

void check_pipeline()
{
    const PipelineConfig pc;
    const auto start = Clock::now();
    const Dataset train = gen_synthetic(pc.task, pc.train_n, pc.train_seed);
    const Dataset test = gen_synthetic(pc.task, pc.test_n, pc.test_seed);

    const NetworkModel init =
            fresh_model(pc.widths, DelaySet::strided(pc.max_delay, pc.stride), pc.seed);
    const NetworkModel trained = bptt_train(init, train, train_config(pc.seed)).model;
    const std::size_t levels_before = trained.connections[1].num_levels();
    const NetworkModel pruned =
            prune_delays(trained, PruneMode::synapse, PruneTarget::levels(pc.keep_levels));
    const NetworkModel tuned = finetune(pruned, train, finetune_config(pc.seed)).model;

    const double acc_trained = evaluate_accuracy(trained, test);
    const double acc_pruned = evaluate_accuracy(pruned, test);
    const double acc_tuned = evaluate_accuracy(tuned, test);

    // Delay-free control with about the same number of surviving weights,
    // given the same total number of training epochs.
    const NetworkModel control_init = fresh_model(pc.control_widths, DelaySet({0}), pc.seed);
    NetworkModel control = bptt_train(control_init, train, train_config(pc.seed)).model;
    control = finetune(control, train, finetune_config(pc.seed)).model;
    const double acc_control = evaluate_accuracy(control, test);
    const double pipeline_seconds = seconds_since(start);

    const std::size_t params = active_parameters(tuned);
    const std::size_t control_params = active_parameters(control);
    std::ostringstream d;
    d << "trained " << fmt(acc_trained) << "%, pruned " << levels_before << "->"
      << tuned.connections[1].num_levels() << " levels " << fmt(acc_pruned) << "%, fine-tuned "
      << fmt(acc_tuned) << "% with " << params << " weights; delay-free control "
      << fmt(acc_control) << "% with " << control_params << " weights; "
      << fmt(pipeline_seconds, 1) << " s";
    const bool ok = acc_tuned >= kPipelineMinAccuracy && acc_tuned >= acc_pruned &&
            acc_tuned - acc_control >= kControlGap && control_params <= params &&
            pipeline_seconds < kPipelineSeconds;
    report(5, ok, "train -> prune 50% of levels -> fine-tune", d.str());

    // Quantization: hardware-aware fine-tuning per precision, with plain
    // post-training rounding shown alongside.
    std::ostringstream q;
    bool q_ok = true;
    q << "float " << fmt(acc_tuned) << "%";
    for (int bits = 8; bits >= 2; --bits)
    {
        const QuantSpec spec = QuantSpec::integer(bits);
        const double post = evaluate_accuracy(quantize(tuned, spec), test);
        const NetworkModel aware = finetune(tuned, train, quant_aware_config(pc.seed, spec)).model;
        const double acc = evaluate_accuracy(aware, test);
        if (bits >= 4)
        {
            q_ok = q_ok && acc_tuned - acc <= kQuantMaxDrop;
        }
        q << "; int" << bits << " " << fmt(acc) << "% (rounded only " << fmt(post) << "%)";
    }
    report(6, q_ok, "int8..int4 within 3 points of float", q.str());
}

// ---------------------------------------------------------------------------
// 8

int run(const std::string &cmd)
{
    return std::system((cmd + " > /dev/null 2>&1").c_str());
}

std::vector<std::string> cli_pipeline(const fs::path &dir)
{
    fs::create_directories(dir);
    const std::string exe = DSNN_EXE;
    const auto p = [&](const char *name) { return (dir / name).string(); };
    const std::vector<std::string> steps{
        "gen-data --out " + p("train.txt") + " --n 60 --seed 3 --pairs 2 --noise 0.01",
        "gen-data --out " + p("test.txt") + " --n 30 --seed 4 --pairs 2 --noise 0.01",
        "train --data " + p("train.txt") + " --out " + p("model.bin") + " --log " +
                p("train.log") + " --widths 2,8,8,3 --tau 1 --epochs 3 --lr 0.01 --seed 5 --threads 2",
        "prune --model " + p("model.bin") + " --out " + p("pruned.bin") + " --target 3",
        "finetune --model " + p("pruned.bin") + " --data " + p("train.txt") + " --out " +
                p("tuned.bin") + " --log " + p("tune.log") + " --epochs 2 --seed 5",
        "finetune --model " + p("tuned.bin") + " --data " + p("train.txt") + " --out " +
                p("qat.bin") + " --epochs 1 --seed 5 --quant-aware int4",
        "quantize --model " + p("tuned.bin") + " --out " + p("int8.bin") + " --scheme int8",
        "sim --model " + p("int8.bin") + " --data " + p("test.txt") + " --backend scdq --trace " +
                p("scdq.jsonl") + " --report " + p("cost.json") + " --events " + p("events.txt"),
        "sim --model " + p("int8.bin") + " --data " + p("test.txt") + " --backend dense --trace " +
                p("dense.jsonl"),
        "compare --ref " + p("dense.jsonl") + " --test " + p("scdq.jsonl") + " --out " +
                p("compare.json"),
        "report --memory --json " + p("memory.json") + " --csv " + p("sweep.csv"),
    };
    for (const auto &step : steps)
    {
        if (run(exe + " " + step) != 0)
        {
            throw std::runtime_error("CLI step failed: " + step);
        }
    }
    return {"train.txt", "test.txt", "model.bin", "train.log", "pruned.bin", "tuned.bin",
        "tune.log", "qat.bin", "int8.bin", "scdq.jsonl", "cost.json", "events.txt",
        "dense.jsonl", "compare.json", "memory.json", "sweep.csv"};
}

void check_cli_determinism()
{
    const fs::path root = fs::temp_directory_path() /
            ("dsnn_accept_" + std::to_string(static_cast<long long>(
                                      Clock::now().time_since_epoch().count())));
    try
    {
        const auto files = cli_pipeline(root / "a");
        cli_pipeline(root / "b");
        std::size_t differing = 0;
        for (const auto &f : files)
        {
            if (read_file_bytes((root / "a" / f).string()) !=
                    read_file_bytes((root / "b" / f).string()))
            {
                ++differing;
                std::cout << "      differs: " << f << '\n';
            }
        }
        fs::remove_all(root);
        report(8, differing == 0, "CLI runs are byte-identical",
                std::to_string(files.size()) + " artifacts compared, " +
                        std::to_string(differing) + " differ");
    }
    catch (const std::exception &e)
    {
        fs::remove_all(root);
        report(8, false, "CLI runs are byte-identical", e.what());
    }
}

// ---------------------------------------------------------------------------
// 9

void check_shd()
{
    const char *dir = std::getenv("DSNN_SHD_DIR");
    if (!dir || !*dir)
    {
        std::cout << "SKIP  [9] SHD 700-48-48-20 with 15 levels  (set DSNN_SHD_DIR to a "
                     "directory with train.txt and test.txt rasters)"
                  << std::endl;
        return;
    }
    const int before = failures;
    try
    {
        const Dataset train = load_dataset((fs::path(dir) / "train.txt").string());
        const Dataset test = load_dataset((fs::path(dir) / "test.txt").string());
        if (train.empty() || test.empty())
        {
            throw std::runtime_error("empty SHD raster file");
        }
        NetworkSpec spec;
        spec.widths = {train.front().channels(), 48, 48, 20};
        spec.delays = DelaySet::strided(60, 2);
        spec.num_timesteps = train.front().timesteps();
        NetworkModel m = make_network(spec);
        init_weights(m, 1, 1.0);
        TrainConfig cfg;
        cfg.epochs = 30;
        cfg.learning_rate = 1e-3;
        cfg.finetune_epochs = 10;
        cfg.threads = 0;
        m = bptt_train(m, train, cfg).model;
        m = prune_delays(m, PruneMode::synapse, PruneTarget::levels(15));
        m = finetune(m, train, cfg).model;
        const double acc = evaluate_accuracy(m, test, resolve_threads(0));
        report(9, acc >= kShdMinAccuracy, "SHD 700-48-48-20 with 15 levels (non-gating)",
                "test accuracy " + fmt(acc) + "%");
    }
    catch (const std::exception &e)
    {
        report(9, false, "SHD 700-48-48-20 with 15 levels (non-gating)", e.what());
    }
    failures = before;
}

} // namespace

int main()
{
    const SuiteResult suite = run_suite();
    {
        std::ostringstream d;
        d << suite.models << " models, scdq mismatches " << suite.scdq_mismatch
          << ", ring mismatches " << suite.ring_mismatch << ", sharedq mismatches "
          << suite.sharedq_mismatch << " of " << suite.axonal_models << " axonal, "
          << fmt(suite.seconds, 2) << " s (includes the unfiltered and bound runs)";
        report(1, suite.models >= 100 && suite.scdq_mismatch == 0 && suite.ring_mismatch == 0 &&
                        suite.sharedq_mismatch == 0 && suite.seconds < kSuiteSeconds,
                "event-driven backends match the dense executor", d.str());
    }
    check_memory_numbers();
    check_wvu(suite);
    check_gradients();
    check_pipeline();
    {
        std::ostringstream d;
        d << suite.connections << " connections, " << suite.bound_violations
          << " violations, max peak/bound " << fmt(suite.worst_bound_ratio, 3);
        report(7, suite.bound_violations == 0, "SCDQ peak occupancy within alpha*I*(2D-1)",
                d.str());
    }
    check_cli_determinism();
    check_shd();
    std::cout << (failures == 0 ? "all gating criteria passed" : "gating criteria failed: ")
              << (failures == 0 ? "" : std::to_string(failures)) << std::endl;
    return failures == 0 ? 0 : 1;
}
