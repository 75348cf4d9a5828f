#ifndef VNFOPT_CLI_HPP
#define VNFOPT_CLI_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vnfopt/experiment.hpp"

namespace vnfopt {

// exit codes shared by every subcommand
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

struct RunConfig {
    std::string topology_path;
    std::string dataset_path;
    std::string models_path;
    std::string out_dir; // defaults to $VNFOPT_OUT or "."
    std::uint64_t seed = 1;
    int jobs = 1;
    bool verbose = false;

    DatasetConfig dataset;

    ForecastConfig forecast;
    std::vector<int> rmse_periods = {1, 50};

    std::string solver = "greedy";
    std::string scenario = "obsv";
    std::string weights = "joint";
    ChainGenConfig chain;
    ScenarioConfig scenario_cfg;
    double server_capacity = -1.0; // override for solve/export-lp

    std::string sweep_axis = "server_capacity";
    std::vector<double> sweep_values;
    double sweep_fixed_capacity = 1000.0;
    int sweep_replicates = 20;

    std::string lp_out = "model.lp";
    std::string prior_solution_path; // phase-2 export when set
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);
std::string default_out_dir();

int run_generate(const RunConfig& cfg);
int run_train(const RunConfig& cfg);
int run_solve(const RunConfig& cfg);
int run_sweep_cmd(const RunConfig& cfg);
int run_export_lp(const RunConfig& cfg);

} // namespace vnfopt

#endif
