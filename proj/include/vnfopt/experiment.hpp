#ifndef VNFOPT_EXPERIMENT_HPP
#define VNFOPT_EXPERIMENT_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "vnfopt/forecast.hpp"
#include "vnfopt/rng.hpp"
#include "vnfopt/solvers.hpp"
#include "vnfopt/traffic.hpp"

namespace vnfopt {

enum class ScenarioKind { Observed, Overprovision, Predicted };
enum class SolverKind { Exact, Greedy, FirstFit, RandomFit };

const char* to_string(ScenarioKind k);
const char* to_string(SolverKind k);
ScenarioKind scenario_from_string(const std::string& name);
SolverKind solver_from_string(const std::string& name);
WeightsMode weights_from_string(const std::string& name);

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::Observed;
    double over_fraction = 0.8;
    int t0_window = 18; // first-placement time drawn from the first N samples
    int delta_t = 6;    // samples between the two placements
};

// Knobs for materializing service chains on top of a demand dataset.
struct ChainGenConfig {
    int fixed_length = -1; // <= 0: uniform in [length_min, length_max]
    int length_min = 1;
    int length_max = 10;
    double load_ratio_min = 0.01;
    double load_ratio_max = 1.0;
    double overhead_frac_min = 0.01; // fraction of the VNF's nominal processing load
    double overhead_frac_max = 0.10;
    double sync_frac = 0.1; // sync_ratio = sync_frac * load_ratio
    bool replicable = true;
    double max_delay_s = 0.4;
    double d_proq_s = 0.003;
    double d_prox_s = 0.005;
    double d_prox_min_s = 0.002;
    double d_pro_max_s = 0.010;
    double proc_capacity = -1.0; // <= 0: use the (non-cloud) server capacity
};

// One SFC per dataset group; VNF parameters drawn from rng. Demand values are
// placeholders until set_demand_values.
Instance build_instance(std::shared_ptr<const Topology> topo,
                        std::shared_ptr<const PathCatalog> catalog, const DemandDataset& dataset,
                        const ChainGenConfig& chain, Rng& rng);

// per-group, per-flow demand values for one placement phase
using DemandView = std::vector<std::vector<double>>;

void set_demand_values(Instance& inst, const DemandView& view);

// Phase-1 demand values at absolute sample t0: observed value, 80% of the
// historical per-flow maximum, or the LSTM forecast of t0+delta_t.
DemandView scenario_demand_view(const DemandDataset& dataset, const ScenarioConfig& scenario,
                                const ForecastStore* store, int t0_abs);

DemandView observed_view(const DemandDataset& dataset, int t_abs);

struct TwoPhaseResult {
    SolveResult phase1;
    SolveResult phase2;
    int t0_local = 0;
    int t0_abs = 0;
    bool phase1_ran = false;
    bool phase2_ran = false;
};

SolveResult run_solver(SolverKind kind, const SolveRequest& req);

// Phase 1 under the scenario's demand view (no prior, migration weight off),
// then phase 2 on observed values at t0+delta_t with the phase-1 placement as
// prior. Phase-1 infeasibility aborts the run.
TwoPhaseResult run_two_phase(const Instance& base, const DemandDataset& dataset,
                             const ScenarioConfig& scenario, SolverKind solver, WeightsMode mode,
                             const ForecastStore* store, std::uint64_t seed);

enum class SweepAxis { SfcLength, ServerCapacity };

struct SweepConfig {
    SweepAxis axis = SweepAxis::ServerCapacity;
    std::vector<double> axis_values;
    double fixed_capacity = 1000.0; // server capacity for the sfc_length axis
    int replicates = 20;
    std::uint64_t master_seed = 1;
    SolverKind solver = SolverKind::Greedy;
    WeightsMode weights = WeightsMode::Joint;
    std::vector<ScenarioKind> scenarios = {ScenarioKind::Observed, ScenarioKind::Overprovision,
                                           ScenarioKind::Predicted};
    int jobs = 1;
    ChainGenConfig chain;
    ScenarioConfig scenario_cfg; // kind overridden per row
};

struct SweepRow {
    double axis_value = 0.0;
    ScenarioKind scenario = ScenarioKind::Observed;
    int replicate = 0;
    std::uint64_t seed = 0; // derived row seed; rows reproduce from it alone
    SolverKind solver = SolverKind::Greedy;
    SolveStatus status = SolveStatus::Infeasible;
    bool phase1_feasible = false;
    int t0_local = 0;
    int migrations = 0, replications = 0, cloud_vnfs = 0;
    double objective = 0.0;
    double mean_link_util = 0.0, mean_server_util = 0.0, mean_delay_ms = 0.0;
};

struct SweepReport {
    SweepConfig config;
    std::vector<SweepRow> rows;
};

std::uint64_t sweep_row_seed(std::uint64_t master, double axis_value, ScenarioKind scenario,
                             int replicate);

// Executes one row from its seed; used both by the sweep pool and to re-run a
// recorded row bit-exactly.
SweepRow run_sweep_row(std::shared_ptr<const Topology> topo,
                       std::shared_ptr<const PathCatalog> catalog, const DemandDataset& dataset,
                       const ForecastStore* store, const SweepConfig& cfg, double axis_value,
                       ScenarioKind scenario, int replicate, std::uint64_t seed_row);

SweepReport run_sweep(std::shared_ptr<const Topology> topo,
                      std::shared_ptr<const PathCatalog> catalog, const DemandDataset& dataset,
                      const ForecastStore* store, const SweepConfig& cfg);

std::string sweep_to_csv(const SweepReport& report);
std::string sweep_sidecar_json(const SweepReport& report);

} // namespace vnfopt

#endif
