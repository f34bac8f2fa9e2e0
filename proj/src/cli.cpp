#include "relsim/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <iostream>

#include <CLI11.hpp>

#include "relsim/config.hpp"
#include "relsim/csv.hpp"
#include "relsim/simulation.hpp"
#include "relsim/sweep.hpp"

namespace relsim {

namespace {

std::vector<double> parse_value_list(const std::string& list) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= list.size()) {
        std::size_t comma = list.find(',', start);
        std::string piece = list.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        if (piece.empty()) {
            throw ConfigError("empty entry in value list '" + list + "'");
        }
        values.push_back(evaluate_expression(piece));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (values.empty()) {
        throw ConfigError("empty value list");
    }
    return values;
}

int do_run(const std::string& config_path, bool seed_given, std::uint64_t seed) {
    SimParams params = parse_config_file(config_path);
    std::uint64_t effective_seed = seed_given ? seed : params.base_seed;
    RunResult result = run_simulation(params, effective_seed, 0);
    for (const MetricDef& metric : run_metrics()) {
        std::cout << metric.name << " = " << format_number(metric.get(result)) << '\n';
    }
    return 0;
}

int do_sweep(const std::string& config_path, const std::vector<std::string>& keys,
             const std::vector<std::string>& value_lists, bool reps_given, int reps,
             bool seed_given, std::uint64_t seed, const std::string& out_path) {
    if (keys.size() != value_lists.size()) {
        throw ConfigError("each --param needs a matching --values list");
    }

    SimParams base = parse_config_file(config_path);

    SweepSpec spec;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        spec.axes.push_back({keys[i], parse_value_list(value_lists[i])});
        if (i > 0) spec.name += " x ";
        spec.name += keys[i];
    }
    spec.replications = reps_given ? reps : base.replications;
    spec.base_seed = seed_given ? seed : base.base_seed;

    SweepResult result = run_sweep(spec, base);
    write_results(result, out_path);
    std::cout << "wrote " << out_path << " and " << raw_csv_path(out_path) << " ("
              << result.cells.size() << " cells x " << spec.replications << " replications)\n";
    return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
    CLI::App app{"Discrete-event reliability simulator for large training clusters"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;

    CLI::App* run_cmd = app.add_subcommand("run", "Simulate one configuration and print its metrics");
    run_cmd->add_option("--config", config_path, "Configuration file (key = expression lines)")
        ->required();
    CLI::Option* run_seed = run_cmd->add_option("--seed", seed, "Base RNG seed (default 0)");

    std::vector<std::string> keys;
    std::vector<std::string> value_lists;
    int replications = 1;
    std::string out_path;

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Sweep one or two parameters and write CSV summaries");
    sweep_cmd->add_option("--config", config_path, "Configuration file (key = expression lines)")
        ->required();
    sweep_cmd
        ->add_option("--param", keys, "Parameter to sweep (repeat once for a two-way sweep)")
        ->allow_extra_args(false);
    sweep_cmd
        ->add_option("--values", value_lists,
                     "Comma-separated values for the matching --param; arithmetic allowed")
        ->allow_extra_args(false);
    CLI::Option* sweep_reps =
        sweep_cmd->add_option("--replications", replications, "Replications per cell");
    CLI::Option* sweep_seed = sweep_cmd->add_option("--seed", seed, "Base RNG seed (default 0)");
    sweep_cmd->add_option("--out", out_path, "Summary CSV path; raw rows land beside it")
        ->required();

    try {
        std::reverse(args.begin(), args.end());  // CLI11's vector interface wants them backwards
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run_cmd->parsed()) {
            return do_run(config_path, run_seed->count() > 0, seed);
        }
        if (keys.empty()) {
            throw ConfigError("sweep requires at least one --param/--values pair");
        }
        if (keys.size() > 2) {
            throw ConfigError("at most two --param axes are supported");
        }
        return do_sweep(config_path, keys, value_lists, sweep_reps->count() > 0, replications,
                        sweep_seed->count() > 0, seed, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace relsim
