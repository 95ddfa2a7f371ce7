#include "commands.hpp"

#include "predacgan/backtest/engine.hpp"
#include "predacgan/backtest/report.hpp"
#include "predacgan/common/csv.hpp"
#include "predacgan/common/errors.hpp"
#include "predacgan/common/parallel.hpp"
#include "predacgan/data/dataset.hpp"
#include "predacgan/data/features.hpp"
#include "predacgan/data/prices.hpp"
#include "predacgan/data/synth.hpp"
#include "predacgan/gan/checkpoint.hpp"
#include "predacgan/gan/trainer.hpp"
#include "predacgan/portfolio/weighting.hpp"
#include "predacgan/predict/ensemble.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

namespace predacgan::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kConfigEcho = "resolved_config.toml";

// A subcommand is a standalone CLI11 app so that its config file is a flat
// key = value list with no sections.
struct Command {
    std::string description;
    std::function<void(CLI::App&, std::function<int()>&)> setup;
};

void add_common(CLI::App& app, fs::path& out) {
    app.set_config("--config", "", "Read options from a flat key = value file")->configurable(false);
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.option_defaults()->always_capture_default();
    app.add_option("--out", out, "Output directory")->required();
}

// One `key=value` line per option, in declaration order, using the parsed
// value when given and the default otherwise. Lists are comma-joined.
void echo_config(const CLI::App& app, const fs::path& out) {
    auto file = csv::open_output(out / kConfigEcho);
    for (const CLI::Option* op : app.get_options()) {
        if (!op->get_configurable() || op->get_single_name() == "help") {
            continue;
        }
        std::string value;
        if (op->get_expected_max() == 0) {
            value = op->as<bool>() ? "true" : "false";
        } else if (op->count() > 0) {
            for (const auto& r : op->results()) {
                value += (value.empty() ? "" : ",") + r;
            }
        } else {
            value = op->get_default_str();
        }
        if (value.empty()) {
            continue;
        }
        file << op->get_single_name() << "=\"" << value << "\"\n";
    }
    if (!file) throw IoError("failed writing " + (out / kConfigEcho).string());
}

data::Universe read_universe(const fs::path& path) {
    auto table = data::load_prices(path);
    if (table.missing_rows > 0) {
        std::cerr << "note: " << table.missing_rows << " missing observations in " << path.string() << '\n';
    }
    return std::move(table.series);
}

void warn_sample_count(std::size_t samples, bool thresholds_used) {
    if (thresholds_used && samples != predict::kReferenceSampleCount) {
        std::cerr << "warning: risk thresholds are calibrated at I = " << predict::kReferenceSampleCount
                  << " samples but I = " << samples << "; U scales linearly with I\n";
    }
}

// ---- synth ---------------------------------------------------------------

void setup_synth(CLI::App& app, std::function<int()>& action) {
    static data::SynthConfig cfg;
    static fs::path out;
    add_common(app, out);
    app.add_option("--signal", cfg.n_signal_assets, "Number of signal assets");
    app.add_option("--noise", cfg.n_noise_assets, "Number of noise assets");
    app.add_option("--strength", cfg.signal_strength, "Signal drift strength")->check(CLI::NonNegativeNumber);
    app.add_option("--sigma", cfg.noise_sigma, "Daily log-return volatility")->check(CLI::PositiveNumber);
    app.add_option("--days", cfg.n_days, "Trading days per asset");
    app.add_option("--input-window", cfg.input_window, "Signal statistic window T_i");
    app.add_option("--horizon", cfg.horizon, "Prediction horizon T_o");
    app.add_option("--initial-price", cfg.initial_price, "Starting close")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.rng_seed, "Master seed")->required();

    action = [&app] {
        const auto market = data::synth_market(cfg);
        data::write_prices(market.series, out / "prices.csv");
        data::write_manifest(market.manifest, out / "manifest.csv");
        echo_config(app, out);
        std::cout << "synth: " << cfg.n_signal_assets << " signal + " << cfg.n_noise_assets
                  << " noise assets, " << cfg.n_days << " days, seed " << cfg.rng_seed << '\n';
        return kExitOk;
    };
}

// ---- dataset / train shared sample selection -----------------------------

struct SampleOptions {
    fs::path prices;
    data::DatasetParams params;
    data::TimeIndex train_start = -1;  // -1: first time with a full window
    data::TimeIndex train_end = -1;    // -1: last date in the file
    data::TimeIndex stride = 1;

    void add(CLI::App& app, std::size_t default_window, std::size_t default_horizon) {
        params.input_window = default_window;
        params.horizon = default_horizon;
        app.add_option("--prices", prices, "Price CSV (date,asset_id,close)")->required();
        app.add_option("--input-window", params.input_window, "Feature window T_i");
        app.add_option("--horizon", params.horizon, "Label horizon T_o");
        app.add_option("--lower", params.lower_threshold, "Lower category threshold Th_l");
        app.add_option("--upper", params.upper_threshold, "Upper category threshold Th_u");
        app.add_option("--train-start", train_start, "First sample time (-1: earliest possible)");
        app.add_option("--train-end", train_end,
                       "Last date whose price may enter a label (-1: end of data)");
        app.add_option("--sample-stride", stride, "Days between sample times")->check(CLI::PositiveNumber);
    }

    data::Dataset build(const data::Universe& universe) const {
        const auto [lo, hi] = data::date_range(universe);
        const data::TimeIndex first = train_start >= 0 ? train_start : lo + static_cast<data::TimeIndex>(params.input_window);
        const data::TimeIndex end = train_end >= 0 ? std::min(train_end, hi) : hi;
        const data::TimeIndex last = end - static_cast<data::TimeIndex>(params.horizon);
        if (last < first) {
            throw ConfigError("no sample time fits between train start and train end");
        }
        const auto times = data::stride_times(first, last, stride);
        return data::build_dataset(universe, times, params);
    }
};

void report_dataset(const data::Dataset& ds) {
    const auto h = data::category_histogram(ds.pairs);
    std::cout << "dataset: " << ds.pairs.size() << " pairs (c_minus " << h[0] << ", c_zero " << h[1]
              << ", c_plus " << h[2] << "), " << ds.skipped.size() << " skipped\n";
}

void setup_dataset(CLI::App& app, std::function<int()>& action) {
    static SampleOptions samples;
    static fs::path out;
    add_common(app, out);
    samples.add(app, 200, 21);

    action = [&app] {
        const auto universe = read_universe(samples.prices);
        const auto ds = samples.build(universe);
        data::write_dataset_csv(ds, out / "dataset.csv");
        echo_config(app, out);
        report_dataset(ds);
        return kExitOk;
    };
}

// ---- train ---------------------------------------------------------------

void setup_train(CLI::App& app, std::function<int()>& action) {
    static SampleOptions samples;
    static gan::TrainConfig cfg;
    static fs::path out;
    static bool quiet = false;
    add_common(app, out);
    samples.add(app, 200, 21);
    app.add_option("--lr-d", cfg.lr_d, "Discriminator learning rate");
    app.add_option("--lr-g", cfg.lr_g, "Generator learning rate");
    app.add_option("--beta1", cfg.beta1, "Adam beta1");
    app.add_option("--beta2", cfg.beta2, "Adam beta2");
    app.add_option("--adam-eps", cfg.adam_epsilon, "Adam epsilon");
    app.add_option("--lambda-cg", cfg.lambda_cg, "Generator classification weight");
    app.add_option("--lambda-cd", cfg.lambda_cd, "Discriminator classification weight");
    app.add_option("--batch", cfg.batch_size, "Mini-batch size");
    app.add_option("--epochs", cfg.epochs, "Training epochs");
    app.add_option("--noise-dim", cfg.noise_dim, "Generator noise length");
    app.add_option("--g-hidden", cfg.generator_hidden, "Generator hidden width");
    app.add_option("--d-hidden", cfg.discriminator_hidden, "Discriminator hidden width");
    app.add_option("--seed", cfg.rng_seed, "Master seed")->required();
    app.add_flag("--quiet", quiet, "No per-epoch progress");

    action = [&app] {
        const auto universe = read_universe(samples.prices);
        const auto ds = samples.build(universe);
        report_dataset(ds);
        gan::ProgressSink progress;
        if (!quiet) {
            progress = [](const gan::EpochLoss& e) {
                std::cerr << "epoch " << e.epoch << " d_loss " << e.d_loss << " g_loss " << e.g_loss << '\n';
            };
        }
        auto result = gan::train(ds.pairs, cfg, progress);
        const std::size_t epochs = result.trace.size();
        gan::Checkpoint ck{std::move(result.generator), std::move(result.discriminator), cfg, epochs};
        gan::save_checkpoint(ck, out / "checkpoint.json");
        gan::write_loss_trace(result.trace, out / "loss_trace.csv");
        echo_config(app, out);
        std::cout << "train: " << epochs << " epochs, checkpoint " << (out / "checkpoint.json").string() << '\n';
        return kExitOk;
    };
}

// ---- predict -------------------------------------------------------------

struct WindowOptions {
    fs::path checkpoint;
    fs::path prices;
    data::TimeIndex eval_start = -1;
    data::TimeIndex eval_end = -1;
    data::TimeIndex stride = -1;  // -1: the horizon
    std::size_t horizon = 21;
    std::size_t samples = predict::kReferenceSampleCount;
    std::uint64_t seed = 0;
    std::size_t threads = default_thread_count();

    void add(CLI::App& app) {
        app.add_option("--checkpoint", checkpoint, "Checkpoint JSON from train")->required();
        app.add_option("--prices", prices, "Price CSV (date,asset_id,close)")->required();
        app.add_option("--eval-start", eval_start, "First rebalance time")->required();
        app.add_option("--eval-end", eval_end, "Last rebalance time")->required();
        app.add_option("--stride", stride, "Days between rebalances (-1: the horizon)");
        app.add_option("--horizon", horizon, "Holding horizon T_o")->check(CLI::PositiveNumber);
        app.add_option("--samples", samples, "Ensemble size I")->check(CLI::PositiveNumber);
        app.add_option("--seed", seed, "Prediction noise seed");
        app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    }

    data::TimeIndex effective_stride() const {
        return stride > 0 ? stride : static_cast<data::TimeIndex>(horizon);
    }
};

gan::Checkpoint read_checkpoint(const fs::path& path) {
    if (!fs::exists(path)) {
        throw IoError("checkpoint not found: " + path.string());
    }
    return gan::load_checkpoint(path);
}

void setup_predict(CLI::App& app, std::function<int()>& action) {
    static WindowOptions w;
    static fs::path out;
    add_common(app, out);
    w.add(app);

    action = [&app] {
        const auto ck = read_checkpoint(w.checkpoint);
        const auto universe = read_universe(w.prices);
        const std::size_t window = ck.generator.condition_dim();
        std::vector<predict::AssetPrediction> all;
        for (const auto t : data::stride_times(w.eval_start, w.eval_end, w.effective_stride())) {
            std::vector<predict::Condition> conditions;
            for (const auto& s : universe) {
                if (data::has_feature_window(s, t, window)) {
                    conditions.push_back({s.asset_id, t, data::build_features(s, t, window).values});
                }
            }
            auto preds = predict::predict_universe(ck.generator, conditions, w.samples, w.seed, w.threads);
            all.insert(all.end(), std::make_move_iterator(preds.begin()), std::make_move_iterator(preds.end()));
        }
        predict::write_predictions_csv(all, out / "predictions.csv");
        echo_config(app, out);
        std::cout << "predict: " << all.size() << " predictions\n";
        return kExitOk;
    };
}

// ---- backtest ------------------------------------------------------------

void setup_backtest(CLI::App& app, std::function<int()>& action) {
    static WindowOptions w;
    static fs::path out;
    static data::TimeIndex train_end = -1;
    static std::vector<double> th_p{0.1};
    static double th_r = 0.0;
    static std::vector<double> th_r_grid;
    static bool one_sided = false;
    static std::string benchmark = "equal_weight";
    add_common(app, out);
    w.add(app);
    app.add_option("--train-end", train_end, "Last training date (-1: eval-start - 1)");
    app.add_option("--thp", th_p, "Fraction per side Th_p; several values give a comparison")->delimiter(',')->default_str("0.1");
    app.add_option("--thr", th_r, "Risk threshold Th_r (0: predictions only)");
    app.add_option("--thr-grid", th_r_grid, "Th_r sweep for the comparison CSV")->delimiter(',')->default_str("");
    app.add_flag("--allow-one-sided", one_sided, "Keep a lone surviving side instead of a zero book");
    app.add_option("--benchmark", benchmark, "Information-ratio benchmark")
        ->check(CLI::IsMember({"equal_weight", "zero"}));

    action = [&app] {
        if (th_p.empty()) throw ConfigError("--thp needs at least one value");
        const auto ck = read_checkpoint(w.checkpoint);
        const auto universe = read_universe(w.prices);

        backtest::BacktestConfig cfg;
        cfg.eval_start = w.eval_start;
        cfg.eval_end = w.eval_end;
        cfg.train_end = train_end >= 0 ? train_end : w.eval_start - 1;
        cfg.rebalance_stride = w.effective_stride();
        cfg.selection.th_p = th_p.front();
        cfg.selection.th_r = th_r;
        cfg.selection.allow_one_sided = one_sided;
        cfg.samples = w.samples;
        cfg.input_window = ck.generator.condition_dim();
        cfg.horizon = w.horizon;
        cfg.rng_seed = w.seed;
        cfg.benchmark = backtest::benchmark_from_string(benchmark);
        cfg.threads = w.threads;

        const bool thresholds_used =
            th_r != 0.0 || std::any_of(th_r_grid.begin(), th_r_grid.end(), [](double v) { return v != 0.0; });
        warn_sample_count(w.samples, thresholds_used);

        const auto predictions = backtest::predict_rebalances(ck.generator, universe, cfg);
        std::vector<predict::AssetPrediction> flat;
        for (const auto& rb : predictions) {
            flat.insert(flat.end(), rb.predictions.begin(), rb.predictions.end());
        }
        predict::write_predictions_csv(flat, out / "predictions.csv");

        const auto report = backtest::evaluate_selection(predictions, universe, cfg, cfg.selection);
        backtest::write_report_bundle(report, cfg, out);

        if (!th_r_grid.empty() || th_p.size() > 1) {
            const std::vector<double> grid = th_r_grid.empty() ? std::vector<double>{th_r} : th_r_grid;
            const auto rows = backtest::threshold_grid(predictions, universe, cfg, th_p, grid);
            backtest::write_comparison_csv(rows, out / "comparison.csv");
        }
        echo_config(app, out);

        const auto& m = report.metrics;
        std::cout << "backtest: " << report.periods.size() << " periods, " << report.degenerate_periods
                  << " degenerate, MDD " << m.mmd << ", yearly Sharpe ";
        if (m.sharpe_yearly) {
            std::cout << *m.sharpe_yearly;
        } else {
            std::cout << "undefined";
        }
        std::cout << '\n';
        return kExitOk;
    };
}

const std::map<std::string, Command>& commands() {
    static const std::map<std::string, Command> table{
        {"synth", {"Generate a seeded synthetic market", setup_synth}},
        {"dataset", {"Build the (X, category) training table", setup_dataset}},
        {"train", {"Train the conditional GAN", setup_train}},
        {"predict", {"Ensemble predictions and risk per asset", setup_predict}},
        {"backtest", {"Market-neutral backtest and report bundle", setup_backtest}},
    };
    return table;
}

void print_usage(std::ostream& os) {
    os << "usage: predacgan <command> [options]\n\ncommands:\n";
    for (const auto& [name, cmd] : commands()) {
        os << "  " << name << std::string(10 - name.size(), ' ') << cmd.description << '\n';
    }
    os << "\nRun 'predacgan <command> --help' for the options of one command.\n";
}

}  // namespace

int run(const std::vector<std::string>& args) {
    if (args.empty()) {
        print_usage(std::cerr);
        return kExitUsage;
    }
    if (args[0] == "-h" || args[0] == "--help" || args[0] == "help") {
        print_usage(std::cout);
        return kExitOk;
    }
    const auto it = commands().find(args[0]);
    if (it == commands().end()) {
        std::cerr << "unknown command '" << args[0] << "'\n";
        print_usage(std::cerr);
        return kExitUsage;
    }

    CLI::App app{it->second.description, "predacgan " + args[0]};
    std::function<int()> action;
    it->second.setup(app, action);

    std::vector<std::string> rest(args.rbegin(), args.rend() - 1);  // CLI11 consumes from the back
    try {
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        return action();
    } catch (const DivergenceError& e) {
        std::cerr << "error: training diverged at epoch " << e.epoch() << ": " << e.what() << '\n';
        return kExitDivergence;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace predacgan::cli
