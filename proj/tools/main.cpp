#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vnfopt/cli.hpp"

namespace {

void add_common(CLI::App* cmd, std::string& config_path, vnfopt::RunConfig& cfg) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--topology", cfg.topology_path, "topology spec (JSON)");
    cmd->add_option("--dataset", cfg.dataset_path, "demand dataset (JSON)");
    cmd->add_option("--models", cfg.models_path, "forecast model store (JSON)");
    cmd->add_option("--out", cfg.out_dir, "output directory (default $VNFOPT_OUT or .)");
    cmd->add_option("--seed", cfg.seed, "master seed");
    cmd->add_option("--jobs", cfg.jobs, "worker threads");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"VNF placement study: traffic generation, forecasting, two-phase solvers"};
    app.require_subcommand(1);

    std::string config_path;
    vnfopt::RunConfig flags; // flag values override the config file

    auto* generate = app.add_subcommand("generate", "generate a demand dataset");
    add_common(generate, config_path, flags);
    generate->add_option("--periods", flags.dataset.periods, "periods to generate");
    generate->add_option("--cv", flags.dataset.cv, "lognormal coefficient of variation");

    auto* train = app.add_subcommand("train", "train per-flow forecast models");
    add_common(train, config_path, flags);
    train->add_option("--train-periods", flags.forecast.train_periods, "periods used to train");
    train->add_option("--rmse-periods", flags.rmse_periods, "training-period counts for the RMSE report");
    train->add_option("--max-epochs", flags.forecast.max_epochs, "epoch safety cap");

    auto* solve = app.add_subcommand("solve", "run the two-phase placement once");
    add_common(solve, config_path, flags);
    solve->add_option("--solver", flags.solver, "exact|greedy|ff|rf");
    solve->add_option("--scenario", flags.scenario, "obsv|over|pred");
    solve->add_option("--weights", flags.weights, "joint|min-migrations|min-replications|min-cloud");
    solve->add_option("--sfc-length", flags.chain.fixed_length, "fixed chain length (random if unset)");
    solve->add_option("--capacity", flags.server_capacity, "override server capacity");

    auto* sweep = app.add_subcommand("sweep", "run a seeded sweep grid");
    add_common(sweep, config_path, flags);
    sweep->add_option("--solver", flags.solver, "exact|greedy|ff|rf");
    sweep->add_option("--weights", flags.weights, "joint|min-migrations|min-replications|min-cloud");
    sweep->add_option("--axis", flags.sweep_axis, "sfc_length|server_capacity");
    sweep->add_option("--values", flags.sweep_values, "axis values");
    sweep->add_option("--fixed-capacity", flags.sweep_fixed_capacity,
                      "server capacity for the sfc_length axis");
    sweep->add_option("--seeds", flags.sweep_replicates, "replicates per cell");

    auto* export_lp = app.add_subcommand("export-lp", "write the MILP in LP format");
    add_common(export_lp, config_path, flags);
    export_lp->add_option("--lp-out", flags.lp_out, "output file name");
    export_lp->add_option("--prior-solution", flags.prior_solution_path,
                          "phase-1 solution JSON (enables the migration term)");
    export_lp->add_option("--sfc-length", flags.chain.fixed_length, "fixed chain length");
    export_lp->add_option("--capacity", flags.server_capacity, "override server capacity");
    export_lp->add_option("--weights", flags.weights, "weights mode for phase 2");

    CLI11_PARSE(app, argc, argv);

    try {
        vnfopt::RunConfig cfg = config_path.empty() ? vnfopt::RunConfig{}
                                                    : vnfopt::load_run_config(config_path);
        // flag overrides
        auto merge = [](std::string& dst, const std::string& src) {
            if (!src.empty()) dst = src;
        };
        merge(cfg.topology_path, flags.topology_path);
        merge(cfg.dataset_path, flags.dataset_path);
        merge(cfg.models_path, flags.models_path);
        merge(cfg.out_dir, flags.out_dir);
        if (flags.seed != 1) cfg.seed = flags.seed;
        if (flags.jobs != 1) cfg.jobs = flags.jobs;
        if (flags.dataset.periods != vnfopt::DatasetConfig{}.periods)
            cfg.dataset.periods = flags.dataset.periods;
        if (flags.dataset.cv != vnfopt::DatasetConfig{}.cv) cfg.dataset.cv = flags.dataset.cv;
        if (flags.forecast.train_periods != vnfopt::ForecastConfig{}.train_periods)
            cfg.forecast.train_periods = flags.forecast.train_periods;
        if (flags.forecast.max_epochs != vnfopt::ForecastConfig{}.max_epochs)
            cfg.forecast.max_epochs = flags.forecast.max_epochs;
        if (flags.rmse_periods != std::vector<int>{1, 50}) cfg.rmse_periods = flags.rmse_periods;
        merge(cfg.solver, flags.solver == "greedy" ? "" : flags.solver);
        merge(cfg.scenario, flags.scenario == "obsv" ? "" : flags.scenario);
        merge(cfg.weights, flags.weights == "joint" ? "" : flags.weights);
        if (flags.chain.fixed_length > 0) cfg.chain.fixed_length = flags.chain.fixed_length;
        if (flags.server_capacity > 0) cfg.server_capacity = flags.server_capacity;
        merge(cfg.sweep_axis, flags.sweep_axis == "server_capacity" ? "" : flags.sweep_axis);
        if (!flags.sweep_values.empty()) cfg.sweep_values = flags.sweep_values;
        if (flags.sweep_fixed_capacity != 1000.0) cfg.sweep_fixed_capacity = flags.sweep_fixed_capacity;
        if (flags.sweep_replicates != 20) cfg.sweep_replicates = flags.sweep_replicates;
        merge(cfg.lp_out, flags.lp_out == "model.lp" ? "" : flags.lp_out);
        merge(cfg.prior_solution_path, flags.prior_solution_path);

        if (generate->parsed()) return vnfopt::run_generate(cfg);
        if (train->parsed()) return vnfopt::run_train(cfg);
        if (solve->parsed()) return vnfopt::run_solve(cfg);
        if (sweep->parsed()) return vnfopt::run_sweep_cmd(cfg);
        if (export_lp->parsed()) return vnfopt::run_export_lp(cfg);
        std::cerr << "no subcommand\n";
        return vnfopt::kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return vnfopt::kExitError;
    }
}
