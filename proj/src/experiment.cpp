#include "vnfopt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include <json.hpp>

namespace vnfopt {

const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Observed: return "obsv";
        case ScenarioKind::Overprovision: return "over";
        case ScenarioKind::Predicted: return "pred";
    }
    return "?";
}

const char* to_string(SolverKind k) {
    switch (k) {
        case SolverKind::Exact: return "exact";
        case SolverKind::Greedy: return "greedy";
        case SolverKind::FirstFit: return "ff";
        case SolverKind::RandomFit: return "rf";
    }
    return "?";
}

ScenarioKind scenario_from_string(const std::string& name) {
    if (name == "obsv") return ScenarioKind::Observed;
    if (name == "over") return ScenarioKind::Overprovision;
    if (name == "pred") return ScenarioKind::Predicted;
    throw std::invalid_argument("unknown scenario: " + name);
}

SolverKind solver_from_string(const std::string& name) {
    if (name == "exact") return SolverKind::Exact;
    if (name == "greedy") return SolverKind::Greedy;
    if (name == "ff") return SolverKind::FirstFit;
    if (name == "rf") return SolverKind::RandomFit;
    throw std::invalid_argument("unknown solver: " + name);
}

WeightsMode weights_from_string(const std::string& name) {
    if (name == "joint") return WeightsMode::Joint;
    if (name == "min-migrations") return WeightsMode::MinMigrations;
    if (name == "min-replications") return WeightsMode::MinReplications;
    if (name == "min-cloud") return WeightsMode::MinCloud;
    throw std::invalid_argument("unknown weights mode: " + name);
}

Instance build_instance(std::shared_ptr<const Topology> topo,
                        std::shared_ptr<const PathCatalog> catalog, const DemandDataset& dataset,
                        const ChainGenConfig& chain, Rng& rng) {
    Instance inst;
    inst.topology = std::move(topo);
    inst.catalog = std::move(catalog);

    std::unordered_map<int, NodeId> by_external;
    for (NodeId n = 0; n < inst.topo().node_count(); ++n)
        by_external[inst.topo().nodes[n].external_id] = n;

    double default_proc_cap = chain.proc_capacity;
    if (default_proc_cap <= 0.0) {
        for (const Server& s : inst.topo().servers)
            if (!s.is_cloud) {
                default_proc_cap = s.capacity;
                break;
            }
    }

    int type_counter = 0;
    for (size_t g = 0; g < dataset.groups.size(); ++g) {
        const DemandGroup& group = dataset.groups[g];
        ServiceChain sfc;
        sfc.id = static_cast<int>(g);
        sfc.src = by_external.at(group.src_external);
        sfc.dst = by_external.at(group.dst_external);
        sfc.max_delay_s = chain.max_delay_s;
        sfc.admissible = inst.paths().admissible_for(sfc.src, sfc.dst);

        double total_base = 0.0;
        for (const DemandFlow& f : group.flows) total_base += f.base_value;
        for (size_t f = 0; f < group.flows.size(); ++f)
            sfc.demands.push_back(Demand{static_cast<int>(f), group.flows[f].base_value});

        const int length = chain.fixed_length > 0
                               ? chain.fixed_length
                               : static_cast<int>(rng.uniform_int(chain.length_min, chain.length_max));
        for (int v = 0; v < length; ++v) {
            VnfSpec vnf;
            vnf.type = type_counter++;
            vnf.load_ratio = rng.uniform(chain.load_ratio_min, chain.load_ratio_max);
            vnf.sync_ratio = chain.sync_frac * vnf.load_ratio;
            vnf.overhead = rng.uniform(chain.overhead_frac_min, chain.overhead_frac_max) *
                           vnf.load_ratio * total_base;
            vnf.replicable = chain.replicable;
            vnf.d_proq_s = chain.d_proq_s;
            vnf.d_prox_s = chain.d_prox_s;
            vnf.d_prox_min_s = chain.d_prox_min_s;
            vnf.d_pro_max_s = chain.d_pro_max_s;
            vnf.proc_capacity = default_proc_cap;
            sfc.vnfs.push_back(vnf);
        }
        inst.sfcs.push_back(std::move(sfc));
    }
    return inst;
}

void set_demand_values(Instance& inst, const DemandView& view) {
    if (view.size() != inst.sfcs.size()) throw std::invalid_argument("demand view shape mismatch");
    for (size_t s = 0; s < inst.sfcs.size(); ++s) {
        if (view[s].size() != inst.sfcs[s].demands.size())
            throw std::invalid_argument("demand view shape mismatch in SFC " + std::to_string(s));
        for (size_t d = 0; d < view[s].size(); ++d)
            inst.sfcs[s].demands[d].value = std::max(view[s][d], 1e-6);
    }
}

DemandView observed_view(const DemandDataset& dataset, int t_abs) {
    DemandView view(dataset.groups.size());
    for (size_t g = 0; g < dataset.groups.size(); ++g)
        for (const DemandFlow& f : dataset.groups[g].flows)
            view[g].push_back(f.values.at(static_cast<size_t>(t_abs)));
    return view;
}

DemandView scenario_demand_view(const DemandDataset& dataset, const ScenarioConfig& scenario,
                                const ForecastStore* store, int t0_abs) {
    switch (scenario.kind) {
        case ScenarioKind::Observed: return observed_view(dataset, t0_abs);
        case ScenarioKind::Overprovision: {
            DemandView view(dataset.groups.size());
            for (size_t g = 0; g < dataset.groups.size(); ++g)
                for (const DemandFlow& f : dataset.groups[g].flows)
                    view[g].push_back(scenario.over_fraction *
                                      *std::max_element(f.values.begin(), f.values.end()));
            return view;
        }
        case ScenarioKind::Predicted: {
            if (store == nullptr)
                throw std::invalid_argument("pred scenario needs trained forecast models");
            DemandView view(dataset.groups.size());
            for (size_t g = 0; g < dataset.groups.size(); ++g) {
                for (size_t f = 0; f < dataset.groups[g].flows.size(); ++f) {
                    const auto& values = dataset.groups[g].flows[f].values;
                    const std::vector<double> history(values.begin(),
                                                      values.begin() + t0_abs + 1);
                    view[g].push_back(
                        predict_horizon(store->models.at(g).at(f), history, scenario.delta_t));
                }
            }
            return view;
        }
    }
    throw std::logic_error("unreachable");
}

SolveResult run_solver(SolverKind kind, const SolveRequest& req) {
    switch (kind) {
        case SolverKind::Exact: return solve_exact(req);
        case SolverKind::Greedy: return solve_greedy(req);
        case SolverKind::FirstFit: return solve_first_fit(req);
        case SolverKind::RandomFit: return solve_random_fit(req);
    }
    throw std::logic_error("unreachable");
}

TwoPhaseResult run_two_phase(const Instance& base, const DemandDataset& dataset,
                             const ScenarioConfig& scenario, SolverKind solver, WeightsMode mode,
                             const ForecastStore* store, std::uint64_t seed) {
    Rng rng(seed);
    TwoPhaseResult out;
    out.t0_local = static_cast<int>(rng.uniform_int(0, scenario.t0_window - 1));
    out.t0_abs = (dataset.config.periods - 1) * dataset.config.samples_per_period + out.t0_local;
    if (out.t0_abs + scenario.delta_t >= dataset.samples())
        throw std::invalid_argument("t0 + delta_t beyond the generated series");

    Instance phase1_inst = base;
    set_demand_values(phase1_inst, scenario_demand_view(dataset, scenario, store, out.t0_abs));
    SolveRequest req1;
    req1.instance = &phase1_inst;
    req1.phase = 1;
    req1.weights = ObjectiveWeights{0.0, 1.0, 1.0};
    req1.rng_seed = rng.next_u64();
    out.phase1 = run_solver(solver, req1);
    out.phase1_ran = true;
    if (out.phase1.status == SolveStatus::Infeasible) return out;

    Instance phase2_inst = base;
    set_demand_values(phase2_inst,
                      observed_view(dataset, out.t0_abs + scenario.delta_t));
    const PriorPlacement prior = to_prior(out.phase1.solution);
    SolveRequest req2;
    req2.instance = &phase2_inst;
    req2.prior = &prior;
    req2.prior_solution = &out.phase1.solution;
    req2.phase = 2;
    req2.weights = make_weights(mode, phase2_inst, &prior);
    req2.rng_seed = rng.next_u64();
    out.phase2 = run_solver(solver, req2);
    out.phase2_ran = true;
    return out;
}

std::uint64_t sweep_row_seed(std::uint64_t master, double axis_value, ScenarioKind scenario,
                             int replicate) {
    return derive_seed(master, {std::bit_cast<std::uint64_t>(axis_value),
                                static_cast<std::uint64_t>(scenario) + 1,
                                static_cast<std::uint64_t>(replicate) + 1});
}

SweepRow run_sweep_row(std::shared_ptr<const Topology> topo,
                       std::shared_ptr<const PathCatalog> catalog, const DemandDataset& dataset,
                       const ForecastStore* store, const SweepConfig& cfg, double axis_value,
                       ScenarioKind scenario, int replicate, std::uint64_t seed_row) {
    SweepRow row;
    row.axis_value = axis_value;
    row.scenario = scenario;
    row.replicate = replicate;
    row.seed = seed_row;
    row.solver = cfg.solver;

    const double capacity =
        cfg.axis == SweepAxis::ServerCapacity ? axis_value : cfg.fixed_capacity;
    auto row_topo = std::make_shared<const Topology>(with_server_capacity(*topo, capacity));

    ChainGenConfig chain = cfg.chain;
    if (cfg.axis == SweepAxis::SfcLength) chain.fixed_length = static_cast<int>(axis_value);

    Rng rng(seed_row);
    Instance base = build_instance(row_topo, catalog, dataset, chain, rng);
    ScenarioConfig sc = cfg.scenario_cfg;
    sc.kind = scenario;
    const TwoPhaseResult res =
        run_two_phase(base, dataset, sc, cfg.solver, cfg.weights, store, rng.next_u64());

    row.t0_local = res.t0_local;
    row.phase1_feasible = res.phase1.status != SolveStatus::Infeasible;
    const SolveResult& final = res.phase2_ran ? res.phase2 : res.phase1;
    row.status = res.phase2_ran ? res.phase2.status : SolveStatus::Infeasible;
    row.migrations = final.metrics.objective.migrations;
    row.replications = final.metrics.objective.replications;
    row.cloud_vnfs = final.metrics.objective.cloud_vnfs;
    row.objective = final.metrics.objective.value;
    row.mean_link_util = final.metrics.mean_link_util;
    row.mean_server_util = final.metrics.mean_server_util;
    row.mean_delay_ms = final.metrics.mean_delay_s * 1000.0;
    return row;
}

SweepReport run_sweep(std::shared_ptr<const Topology> topo,
                      std::shared_ptr<const PathCatalog> catalog, const DemandDataset& dataset,
                      const ForecastStore* store, const SweepConfig& cfg) {
    if (cfg.axis_values.empty() || cfg.replicates < 1 || cfg.scenarios.empty())
        throw std::invalid_argument("sweep needs axis values, scenarios and replicates");

    struct Job {
        double axis_value;
        ScenarioKind scenario;
        int replicate;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (double value : cfg.axis_values)
        for (ScenarioKind sc : cfg.scenarios)
            for (int r = 0; r < cfg.replicates; ++r)
                jobs.push_back({value, sc, r, sweep_row_seed(cfg.master_seed, value, sc, r)});

    SweepReport report;
    report.config = cfg;
    report.rows.resize(jobs.size());

    const int workers = std::max(1, cfg.jobs);
    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const Job& job = jobs[i];
            report.rows[i] = run_sweep_row(topo, catalog, dataset, store, cfg, job.axis_value,
                                           job.scenario, job.replicate, job.seed);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return report;
}

std::string sweep_to_csv(const SweepReport& report) {
    std::ostringstream out;
    out << "axis,scenario,seed,solver,migrations,replications,cloud_vnfs,objective,"
           "mean_link_util,mean_server_util,mean_delay_ms,status\n";
    char buf[400];
    for (const SweepRow& r : report.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%s,%llu,%s,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%s\n",
                      r.axis_value, to_string(r.scenario),
                      static_cast<unsigned long long>(r.seed), to_string(r.solver), r.migrations,
                      r.replications, r.cloud_vnfs, r.objective, r.mean_link_util,
                      r.mean_server_util, r.mean_delay_ms, to_string(r.status));
        out << buf;
    }
    return out.str();
}

std::string sweep_sidecar_json(const SweepReport& report) {
    nlohmann::json j;
    j["axis"] = report.config.axis == SweepAxis::SfcLength ? "sfc_length" : "server_capacity";
    j["axis_values"] = report.config.axis_values;
    j["fixed_capacity"] = report.config.fixed_capacity;
    j["replicates"] = report.config.replicates;
    j["master_seed"] = report.config.master_seed;
    j["solver"] = to_string(report.config.solver);
    nlohmann::json scenarios = nlohmann::json::array();
    for (ScenarioKind sc : report.config.scenarios) scenarios.push_back(to_string(sc));
    j["scenarios"] = scenarios;
    j["rows"] = report.rows.size();
    j["meta"] = {{"generated_unix_s",
                  std::chrono::duration_cast<std::chrono::seconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count()}};
    return j.dump();
}

} // namespace vnfopt
