// dsnn: command-line pipeline for delay-trained spiking networks.
//
//   gen-data -> train -> prune -> finetune -> quantize -> sim -> compare
//   report --memory

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsnn/core/error.hpp"
#include "dsnn/core/network.hpp"
#include "dsnn/delayq/backends.hpp"
#include "dsnn/io/model_file.hpp"
#include "dsnn/io/raster_file.hpp"
#include "dsnn/io/synthetic.hpp"
#include "dsnn/io/trace_file.hpp"
#include "dsnn/metrics/fidelity.hpp"
#include "dsnn/metrics/memory_cost.hpp"
#include "dsnn/metrics/report_json.hpp"
#include "dsnn/train/prune.hpp"
#include "dsnn/train/quantize.hpp"
#include "dsnn/train/trainer.hpp"

using namespace dsnn;

namespace {

void write_text(const std::string &path, const std::string &text)
{
    std::ofstream f(path, std::ios::trunc);
    if (!f || !(f << text))
    {
        throw FormatError("cannot write '" + path + "'");
    }
}

// Sends text to `path`, or stdout when it is empty.
void emit(const std::string &path, const std::string &text)
{
    if (path.empty())
    {
        std::cout << text;
    }
    else
    {
        write_text(path, text);
    }
}

std::string training_log(const std::vector<EpochRecord> &log, const char *phase)
{
    std::string out;
    for (const auto &r : log)
    {
        out += format_epoch(r, phase) + "\n";
    }
    return out;
}

void add_train_options(CLI::App *cmd, TrainConfig &cfg)
{
    cmd->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
    cmd->add_option("--batch", cfg.batch_size, "Minibatch size")->capture_default_str();
    cmd->add_option("--lr", cfg.learning_rate, "Adam learning rate")->capture_default_str();
    cmd->add_option("--lr-step", cfg.lr_step, "Decay the rate every N epochs (0: off)")
            ->capture_default_str();
    cmd->add_option("--lr-gamma", cfg.lr_gamma, "Step decay factor")->capture_default_str();
    cmd->add_option("--beta", cfg.beta, "Surrogate gradient slope")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    cmd->add_option("--threads", cfg.threads, "Worker threads (0: DSNN_THREADS or 1)")
            ->capture_default_str();
    cmd->add_option("--vmem-tiebreak", cfg.vmem_tiebreak, "Weight of final vmem in the logits")
            ->capture_default_str();
    cmd->add_option("--logit-scale", cfg.logit_scale, "Logit scale")->capture_default_str();
    cmd->add_flag("--detach-reset", cfg.detach_reset, "Drop the reset path from gradients");
    cmd->add_option("--weight-decay", cfg.weight_decay, "Decoupled L2 weight decay")
            ->capture_default_str();
    cmd->add_option("--weight-clip", cfg.weight_clip, "Clamp weights to [-clip, clip]");
}

struct TrainArgs
{
    std::string data, out, log, test;
    std::vector<std::size_t> widths{2, 16, 16, 3};
    double tau = 2.0;
    double threshold = 1.0;
    std::string readout = "spike_count";
    std::optional<int> max_delay_limit;
};

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Train delay-parameterized spiking networks and run them on "
                 "delay-queue backends"};
    app.require_subcommand(1);

    // gen-data
    CoincidenceSpec task;
    std::size_t gen_n = 300;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto *gen = app.add_subcommand("gen-data", "Generate the delayed-coincidence dataset");
    gen->add_option("--out", gen_out, "Output raster file")->required();
    gen->add_option("--n", gen_n, "Number of samples")->capture_default_str();
    gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
    gen->add_option("--timesteps", task.timesteps, "Window length T")->capture_default_str();
    gen->add_option("--lags", task.lags, "Class lags")->delimiter(',');
    gen->add_option("--pairs", task.pairs, "Spike pairs per sample")->capture_default_str();
    gen->add_option("--noise", task.noise_rate, "Background spike probability")
            ->capture_default_str();

    // train
    TrainConfig cfg;
    TrainArgs ta;
    auto *train = app.add_subcommand("train", "Train a delay model with BPTT");
    train->add_option("--data", ta.data, "Training raster file")->required();
    train->add_option("--out", ta.out, "Output model file")->required();
    train->add_option("--log", ta.log, "Training log (one JSON record per epoch)");
    train->add_option("--test", ta.test, "Optional held-out raster file to score");
    train->add_option("--widths", ta.widths, "Layer widths, input first")->delimiter(',');
    train->add_option("--max-delay", cfg.max_delay, "Delay levels lie below this value")
            ->capture_default_str();
    train->add_option("--stride", cfg.stride, "Delay level stride")->capture_default_str();
    train->add_option("--max-delay-limit", ta.max_delay_limit, "Platform delay limit");
    train->add_option("--tau", ta.tau, "Membrane time constant")->capture_default_str();
    train->add_option("--threshold", ta.threshold, "Firing threshold")->capture_default_str();
    train->add_option("--readout", ta.readout, "spike_count or max_membrane")
            ->check(CLI::IsMember({"spike_count", "max_membrane"}))
            ->capture_default_str();
    train->add_option("--init-gain", cfg.init_gain, "Weight init gain")->capture_default_str();
    add_train_options(train, cfg);

    // prune
    std::string prune_in, prune_out, prune_mode = "synapse";
    std::optional<std::size_t> prune_levels;
    std::optional<double> prune_keep;
    auto *prune = app.add_subcommand("prune", "Prune delay synapses or axons");
    prune->add_option("--model", prune_in, "Input model")->required();
    prune->add_option("--out", prune_out, "Output model")->required();
    prune->add_option("--mode", prune_mode, "synapse or axonal")
            ->check(CLI::IsMember({"synapse", "axonal"}))
            ->capture_default_str();
    auto *target_opt = prune->add_option("--target", prune_levels,
            "synapse: live delay levels per connection; axonal: axons per neuron");
    auto *keep_opt = prune->add_option("--keep-fraction", prune_keep,
            "Fraction of synapses (or axons) to keep");
    std::string prune_scope = "layer";
    prune->add_option("--scope", prune_scope,
                 "synapse --target counts levels per connection (layer) or per neuron fan-in")
            ->check(CLI::IsMember({"layer", "neuron"}))
            ->capture_default_str();
    target_opt->excludes(keep_opt);
    keep_opt->excludes(target_opt);

    // finetune
    std::string ft_model, ft_data, ft_out, ft_log;
    TrainConfig ft_cfg;
    auto *ft = app.add_subcommand("finetune", "Retrain the surviving synapses");
    ft->add_option("--model", ft_model, "Input model")->required();
    ft->add_option("--data", ft_data, "Training raster file")->required();
    ft->add_option("--out", ft_out, "Output model")->required();
    ft->add_option("--log", ft_log, "Training log");
    std::string ft_quant;
    ft->add_option("--quant-aware", ft_quant,
            "Fine-tune through weights quantized to this scheme and save them quantized");
    add_train_options(ft, ft_cfg);

    // quantize
    std::string q_in, q_out, q_scheme;
    auto *quant = app.add_subcommand("quantize", "Quantize weights");
    quant->add_option("--model", q_in, "Input model")->required();
    quant->add_option("--out", q_out, "Output model")->required();
    quant->add_option("--scheme", q_scheme, "float64, bf16 or int2..int8")->required();

    // eval
    std::string ev_model, ev_data;
    std::size_t ev_threads = 0;
    auto *eval = app.add_subcommand("eval", "Dense-executor accuracy on a labelled set");
    eval->add_option("--model", ev_model, "Model file")->required();
    eval->add_option("--data", ev_data, "Raster file")->required();
    eval->add_option("--threads", ev_threads, "Worker threads");

    // inspect
    std::string in_model;
    auto *inspect = app.add_subcommand("inspect", "Summarize a model file");
    inspect->add_option("--model", in_model, "Model file")->required();

    // sim
    std::string sim_model, sim_data, sim_backend = "dense", sim_trace, sim_events, sim_report;
    bool sim_no_wvu = false, sim_multi = false;
    std::optional<std::size_t> sim_capacity, sim_slots;
    std::size_t sim_threads = 0;
    auto *sim = app.add_subcommand("sim", "Run a model on a backend");
    sim->add_option("--model", sim_model, "Model file")->required();
    sim->add_option("--data", sim_data, "Raster file")->required();
    sim->add_option("--backend", sim_backend, "dense, scdq, ring or sharedq")
            ->check(CLI::IsMember({"dense", "scdq", "ring", "sharedq"}))
            ->capture_default_str();
    sim->add_option("--trace", sim_trace, "Trace output file");
    sim->add_option("--events", sim_events, "Delivery log output file");
    sim->add_option("--report", sim_report, "Queue cost report (JSON)");
    sim->add_flag("--no-wvu", sim_no_wvu, "Disable the SCDQ zero-skipping filter");
    sim->add_option("--capacity", sim_capacity, "SCDQ event capacity");
    sim->add_option("--ring-slots", sim_slots, "Ring buffer slots per neuron");
    sim->add_flag("--multi-copy", sim_multi, "Shared queue: one event copy per useful axon");
    sim->add_option("--threads", sim_threads, "Worker threads");

    // compare
    std::string cmp_ref, cmp_test, cmp_out;
    auto *cmp = app.add_subcommand("compare", "Compare two trace files");
    cmp->add_option("--ref", cmp_ref, "Reference traces")->required();
    cmp->add_option("--test", cmp_test, "Test traces")->required();
    cmp->add_option("--out", cmp_out, "Report file (default stdout)");

    // report
    bool rep_memory = false;
    std::string rep_preset = "all", rep_csv, rep_json;
    std::vector<std::size_t> rep_levels{1, 2, 4, 8, 16, 32, 64};
    std::vector<std::size_t> rep_neurons{48, 128, 256, 512};
    auto *report = app.add_subcommand("report", "Analytic delay-structure memory costs");
    report->add_flag("--memory", rep_memory, "Memory overhead report")->required();
    report->add_option("--preset", rep_preset, "truenorth, loihi, spinnaker or all")
            ->check(CLI::IsMember({"truenorth", "loihi", "spinnaker", "all"}))
            ->capture_default_str();
    report->add_option("--csv", rep_csv, "Write the scaling sweep CSV here");
    report->add_option("--json", rep_json, "Write the preset numbers as JSON here");
    report->add_option("--levels", rep_levels, "Sweep delay levels")->delimiter(',');
    report->add_option("--neurons", rep_neurons, "Sweep neuron counts")->delimiter(',');

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }

    try
    {
        if (*gen)
        {
            save_dataset(gen_synthetic(task, gen_n, gen_seed), gen_out);
        }
        else if (*train)
        {
            const Dataset data = load_dataset(ta.data);
            if (data.empty())
            {
                throw ConfigError("training set is empty");
            }
            cfg.max_delay_limit = ta.max_delay_limit;
            cfg.validate();
            NetworkSpec spec;
            spec.widths = ta.widths;
            spec.delays = DelaySet::strided(cfg.max_delay, cfg.stride);
            spec.neuron = {ta.tau, ta.threshold};
            spec.num_timesteps = data.front().timesteps();
            spec.readout = parse_readout(ta.readout);
            spec.max_delay_limit = ta.max_delay_limit;
            NetworkModel model = make_network(spec);
            init_weights(model, cfg.seed, cfg.init_gain);
            TrainResult res = bptt_train(model, data, cfg);
            save_model(res.model, ta.out);
            if (!ta.log.empty())
            {
                write_text(ta.log, training_log(res.log, "train"));
            }
            if (!ta.test.empty())
            {
                const double acc = evaluate_accuracy(res.model, load_dataset(ta.test), cfg.threads);
                std::cout << "test_accuracy " << acc << '\n';
            }
        }
        else if (*prune)
        {
            if (!prune_levels && !prune_keep)
            {
                throw ConfigError("prune needs --target or --keep-fraction");
            }
            const PruneTarget target = prune_levels ? PruneTarget::levels(*prune_levels,
                                                          parse_level_scope(prune_scope))
                                                    : PruneTarget::keep_fraction(*prune_keep);
            const NetworkModel pruned =
                    prune_delays(load_model(prune_in), parse_prune_mode(prune_mode), target);
            save_model(pruned, prune_out);
            for (std::size_t l = 0; l < pruned.connections.size(); ++l)
            {
                const auto &c = pruned.connections[l];
                std::cout << "connection " << l << ": levels " << c.num_levels()
                          << ", active synapses " << c.active_count() << '\n';
            }
        }
        else if (*ft)
        {
            ft_cfg.finetune_epochs = ft_cfg.epochs;
            if (!ft_quant.empty())
            {
                ft_cfg.quant_aware = QuantSpec::parse(ft_quant);
            }
            TrainResult res = finetune(load_model(ft_model), load_dataset(ft_data), ft_cfg);
            save_model(res.model, ft_out);
            if (!ft_log.empty())
            {
                write_text(ft_log, training_log(res.log, "finetune"));
            }
        }
        else if (*quant)
        {
            save_model(quantize(load_model(q_in), QuantSpec::parse(q_scheme)), q_out);
        }
        else if (*eval)
        {
            const double acc =
                    evaluate_accuracy(load_model(ev_model), load_dataset(ev_data), ev_threads);
            std::cout << "accuracy " << acc << '\n';
        }
        else if (*inspect)
        {
            const NetworkModel model = load_model(in_model);
            std::cout << "quant " << model.quant.name() << ", readout " << to_string(model.readout)
                      << ", T " << model.num_timesteps << ", parameters "
                      << model.parameter_count() << '\n';
            for (std::size_t l = 0; l < model.connections.size(); ++l)
            {
                const auto &c = model.connections[l];
                double peak = 0.0, sum = 0.0;
                for (double x : c.values())
                {
                    peak = std::max(peak, std::abs(x));
                    sum += std::abs(x);
                }
                std::cout << "connection " << l << ": " << c.pre() << "x" << c.post() << ", delays";
                for (int d : c.delays().levels())
                {
                    std::cout << ' ' << d;
                }
                std::cout << ", active " << c.active_count() << ", max|w| " << peak
                          << ", mean|w| "
                          << (c.active_count() ? sum / static_cast<double>(c.active_count()) : 0.0)
                          << ", tau " << model.neurons[l].tau << ", threshold "
                          << model.neurons[l].threshold << '\n';
            }
        }
        else if (*sim)
        {
            const NetworkModel model = load_model(sim_model);
            const Dataset data = load_dataset(sim_data);
            const Backend backend = parse_backend(sim_backend);
            BackendOptions opts;
            opts.zero_skipping = !sim_no_wvu;
            opts.capacity = sim_capacity;
            opts.ring_slots = sim_slots;
            opts.multi_copy = sim_multi;

            std::vector<RunResult> runs;
            std::string events;
            if (!sim_events.empty())
            {
                // Event logs are recorded sample by sample on one thread.
                std::ostringstream log;
                for (std::size_t k = 0; k < data.size(); ++k)
                {
                    std::vector<DeliveryRecord> records;
                    opts.event_log = &records;
                    runs.push_back(run_backend(backend, model, data[k], opts));
                    log << "# sample " << k << '\n';
                    write_event_log(log, records);
                }
                events = log.str();
                opts.event_log = nullptr;
            }
            else
            {
                runs = run_dataset(backend, model, data, opts, resolve_threads(sim_threads));
            }

            std::vector<SimTrace> traces;
            traces.reserve(runs.size());
            std::size_t correct = 0, labelled = 0;
            for (std::size_t k = 0; k < runs.size(); ++k)
            {
                if (data[k].label)
                {
                    ++labelled;
                    correct += runs[k].trace.prediction == *data[k].label ? 1 : 0;
                }
                traces.push_back(std::move(runs[k].trace));
            }
            if (!sim_trace.empty())
            {
                save_traces(sim_trace, traces, dataset_labels(data));
            }
            if (!sim_events.empty())
            {
                write_text(sim_events, events);
            }
            if (!sim_report.empty())
            {
                // Per-connection costs from the worst case over the dataset.
                std::vector<QueueStats> worst(model.connections.size());
                for (const auto &r : runs)
                {
                    for (std::size_t l = 0; l < r.queues.size(); ++l)
                    {
                        auto &w = worst[l];
                        w.peak_occupancy = std::max(w.peak_occupancy, r.queues[l].peak_occupancy);
                        w.max_active_presyn =
                                std::max(w.max_active_presyn, r.queues[l].max_active_presyn);
                        w.pushes += r.queues[l].pushes;
                        w.dropped += r.queues[l].dropped;
                        w.deliveries += r.queues[l].deliveries;
                        w.recirculated += r.queues[l].recirculated;
                    }
                }
                std::vector<CostReport> costs;
                for (std::size_t l = 0; l < model.connections.size(); ++l)
                {
                    costs.push_back(connection_cost(model.connections[l], l, worst[l],
                            static_cast<std::size_t>(model.quant.bits)));
                }
                write_text(sim_report, to_json(costs));
            }
            std::cout << "backend " << to_string(backend) << ": " << data.size() << " samples";
            if (labelled > 0)
            {
                std::cout << ", accuracy "
                          << 100.0 * static_cast<double>(correct) / static_cast<double>(labelled);
            }
            std::cout << '\n';
        }
        else if (*cmp)
        {
            const TraceSet ref = load_traces(cmp_ref);
            const TraceSet test = load_traces(cmp_test);
            std::vector<int> labels = ref.labels;
            const bool any_unlabelled =
                    std::find(labels.begin(), labels.end(), -1) != labels.end();
            if (any_unlabelled)
            {
                labels.clear();
            }
            emit(cmp_out, to_json(compare_traces(ref.traces, test.traces, labels)));
        }
        else if (*report)
        {
            std::vector<PresetReport> reports;
            if (rep_preset == "all")
            {
                for (const auto &p : {truenorth_preset(), loihi_preset(), spinnaker_preset()})
                {
                    reports.push_back(preset_report(p));
                }
            }
            else
            {
                reports.push_back(preset_report(preset_by_name(rep_preset)));
            }
            for (const auto &r : reports)
            {
                print_preset_report(std::cout, r);
            }
            if (!rep_json.empty())
            {
                write_text(rep_json, to_json(reports));
            }
            if (!rep_csv.empty())
            {
                std::ostringstream csv;
                write_sweep_csv(csv, scaling_sweep(rep_levels, rep_neurons));
                write_text(rep_csv, csv.str());
            }
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "dsnn: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
