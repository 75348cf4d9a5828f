#include "vnfopt/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace vnfopt {

namespace fs = std::filesystem;

std::string default_out_dir() {
    const char* env = std::getenv("VNFOPT_OUT");
    return env != nullptr && *env != '\0' ? env : ".";
}

RunConfig parse_run_config(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RunConfig cfg;
    cfg.topology_path = j.value("topology", "");
    cfg.dataset_path = j.value("dataset", "");
    cfg.models_path = j.value("models", "");
    cfg.out_dir = j.value("out", "");
    cfg.seed = j.value("seed", 1ULL);
    cfg.jobs = j.value("jobs", 1);
    cfg.verbose = j.value("verbose", false);

    if (j.contains("generate")) {
        const auto& g = j["generate"];
        cfg.dataset.periods = g.value("periods", cfg.dataset.periods);
        cfg.dataset.flows_min = g.value("flows_min", cfg.dataset.flows_min);
        cfg.dataset.flows_max = g.value("flows_max", cfg.dataset.flows_max);
        cfg.dataset.value_min = g.value("value_min", cfg.dataset.value_min);
        cfg.dataset.value_max = g.value("value_max", cfg.dataset.value_max);
        cfg.dataset.cv = g.value("cv", cfg.dataset.cv);
    }
    if (j.contains("forecast")) {
        const auto& f = j["forecast"];
        cfg.forecast.hidden_units = f.value("hidden_units", cfg.forecast.hidden_units);
        cfg.forecast.train_periods = f.value("train_periods", cfg.forecast.train_periods);
        cfg.forecast.max_epochs = f.value("max_epochs", cfg.forecast.max_epochs);
        cfg.forecast.batch_size = f.value("batch_size", cfg.forecast.batch_size);
        cfg.forecast.horizon = f.value("horizon", cfg.forecast.horizon);
        cfg.forecast.relu_readout = f.value("relu_readout", cfg.forecast.relu_readout);
        if (f.contains("rmse_periods")) cfg.rmse_periods = f["rmse_periods"].get<std::vector<int>>();
    }
    if (j.contains("solve")) {
        const auto& s = j["solve"];
        cfg.solver = s.value("solver", cfg.solver);
        cfg.scenario = s.value("scenario", cfg.scenario);
        cfg.weights = s.value("weights", cfg.weights);
        cfg.chain.fixed_length = s.value("sfc_length", cfg.chain.fixed_length);
        cfg.server_capacity = s.value("server_capacity", cfg.server_capacity);
    }
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        cfg.sweep_axis = s.value("axis", cfg.sweep_axis);
        if (s.contains("values")) cfg.sweep_values = s["values"].get<std::vector<double>>();
        cfg.sweep_fixed_capacity = s.value("fixed_capacity", cfg.sweep_fixed_capacity);
        cfg.sweep_replicates = s.value("replicates", cfg.sweep_replicates);
        cfg.solver = s.value("solver", cfg.solver);
        cfg.weights = s.value("weights", cfg.weights);
    }
    if (j.contains("export_lp")) {
        const auto& e = j["export_lp"];
        cfg.lp_out = e.value("out", cfg.lp_out);
        cfg.prior_solution_path = e.value("prior_solution", cfg.prior_solution_path);
        cfg.chain.fixed_length = e.value("sfc_length", cfg.chain.fixed_length);
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
    const std::string dir = cfg.out_dir.empty() ? default_out_dir() : cfg.out_dir;
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

struct LoadedWorld {
    std::shared_ptr<const Topology> topo;
    std::shared_ptr<const PathCatalog> catalog;
};

LoadedWorld load_world(const RunConfig& cfg) {
    if (cfg.topology_path.empty()) throw std::runtime_error("missing topology path");
    LoadedWorld w;
    w.topo = std::make_shared<const Topology>(build_topology(load_topology_spec(cfg.topology_path)));
    w.catalog = std::make_shared<const PathCatalog>(precompute_paths(*w.topo));
    return w;
}

} // namespace

int run_generate(const RunConfig& cfg) {
    const LoadedWorld w = load_world(cfg);
    const DemandDataset ds = generate_demand_set(cfg.seed, *w.topo, cfg.dataset);
    const std::string json_path = out_path(cfg, "dataset.json");
    write_file(json_path, dataset_to_json(ds));
    write_file(out_path(cfg, "dataset.csv"), dataset_to_csv(ds));
    std::cout << "dataset: " << json_path << " (" << ds.groups.size() << " SFC groups)\n";
    return kExitOk;
}

int run_train(const RunConfig& cfg) {
    if (cfg.dataset_path.empty()) throw std::runtime_error("missing dataset path");
    const DemandDataset ds = load_dataset(cfg.dataset_path);

    ForecastStore store;
    store.config = cfg.forecast;
    store.config.samples_per_period = ds.config.samples_per_period;
    store.models.resize(ds.groups.size());
    for (size_t g = 0; g < ds.groups.size(); ++g)
        store.models[g].resize(ds.groups[g].flows.size());

    struct Job {
        size_t g, f;
    };
    std::vector<Job> jobs;
    for (size_t g = 0; g < ds.groups.size(); ++g)
        for (size_t f = 0; f < ds.groups[g].flows.size(); ++f) jobs.push_back({g, f});

    std::ostringstream rmse_csv;
    rmse_csv << "group,flow,train_periods,rmse,train_seconds\n";
    std::vector<std::string> rmse_rows(jobs.size());

    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const auto [g, f] = jobs[i];
            DemandSeries series;
            series.sfc_id = static_cast<int>(g);
            series.flow_id = static_cast<int>(f);
            series.values = ds.groups[g].flows[f].values;
            const std::uint64_t seed = derive_seed(cfg.seed, {0x747261696eULL, g, f});
            store.models[g][f] = train(series, store.config, seed);
            const auto points = evaluate_rmse(series, store.config, cfg.rmse_periods, seed);
            std::ostringstream rows;
            char buf[160];
            for (const RmsePoint& p : points) {
                std::snprintf(buf, sizeof buf, "%zu,%zu,%d,%.17g,%.6f\n", g, f, p.train_periods,
                              p.rmse, p.train_seconds);
                rows << buf;
            }
            rmse_rows[i] = rows.str();
        }
    };
    const int workers = std::max(1, cfg.jobs);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (const auto& rows : rmse_rows) rmse_csv << rows;

    const std::string models_path =
        cfg.models_path.empty() ? out_path(cfg, "models.json") : cfg.models_path;
    save_store(store, models_path);
    write_file(out_path(cfg, "rmse.csv"), rmse_csv.str());
    std::cout << "models: " << models_path << " (" << jobs.size() << " flows)\n";
    return kExitOk;
}

namespace {

ChainGenConfig chain_for(const RunConfig& cfg) { return cfg.chain; }

} // namespace

int run_solve(const RunConfig& cfg) {
    const LoadedWorld w = load_world(cfg);
    if (cfg.dataset_path.empty()) throw std::runtime_error("missing dataset path");
    const DemandDataset ds = load_dataset(cfg.dataset_path);

    std::shared_ptr<const Topology> topo = w.topo;
    if (cfg.server_capacity > 0.0)
        topo = std::make_shared<const Topology>(with_server_capacity(*w.topo, cfg.server_capacity));

    ForecastStore store;
    const ScenarioKind scenario = scenario_from_string(cfg.scenario);
    const ForecastStore* store_ptr = nullptr;
    if (scenario == ScenarioKind::Predicted) {
        if (cfg.models_path.empty()) throw std::runtime_error("pred scenario needs --models");
        store = load_store(cfg.models_path);
        store_ptr = &store;
    }

    Rng rng(cfg.seed);
    Instance base = build_instance(topo, w.catalog, ds, chain_for(cfg), rng);
    ScenarioConfig sc = cfg.scenario_cfg;
    sc.kind = scenario;
    const TwoPhaseResult res =
        run_two_phase(base, ds, sc, solver_from_string(cfg.solver),
                      weights_from_string(cfg.weights), store_ptr, rng.next_u64());

    nlohmann::json j;
    j["t0_local"] = res.t0_local;
    j["t0_abs"] = res.t0_abs;
    j["phase1"] = {{"status", to_string(res.phase1.status)},
                   {"metrics", nlohmann::json::parse(metrics_to_json(res.phase1.metrics))},
                   {"notes", res.phase1.notes}};
    if (res.phase2_ran)
        j["phase2"] = {{"status", to_string(res.phase2.status)},
                       {"metrics", nlohmann::json::parse(metrics_to_json(res.phase2.metrics))},
                       {"notes", res.phase2.notes}};
    write_file(out_path(cfg, "result.json"), j.dump(2));
    write_file(out_path(cfg, "solution_phase1.json"), solution_to_json(res.phase1.solution));
    if (res.phase2_ran)
        write_file(out_path(cfg, "solution_phase2.json"), solution_to_json(res.phase2.solution));

    const SolveStatus status = res.phase2_ran ? res.phase2.status : res.phase1.status;
    std::cout << "status: " << to_string(status) << "\n";
    return status == SolveStatus::Infeasible ? kExitInfeasible : kExitOk;
}

int run_sweep_cmd(const RunConfig& cfg) {
    const LoadedWorld w = load_world(cfg);
    if (cfg.dataset_path.empty()) throw std::runtime_error("missing dataset path");
    const DemandDataset ds = load_dataset(cfg.dataset_path);

    SweepConfig sweep;
    sweep.axis = cfg.sweep_axis == "sfc_length" ? SweepAxis::SfcLength : SweepAxis::ServerCapacity;
    sweep.axis_values = cfg.sweep_values;
    if (sweep.axis_values.empty()) {
        if (sweep.axis == SweepAxis::SfcLength)
            for (int v = 1; v <= 10; ++v) sweep.axis_values.push_back(v);
        else
            for (int c = 250; c <= 3000; c += 250) sweep.axis_values.push_back(c);
    }
    sweep.fixed_capacity = cfg.sweep_fixed_capacity;
    sweep.replicates = cfg.sweep_replicates;
    sweep.master_seed = cfg.seed;
    sweep.solver = solver_from_string(cfg.solver);
    sweep.weights = weights_from_string(cfg.weights);
    sweep.jobs = cfg.jobs;
    sweep.chain = cfg.chain;
    sweep.chain.fixed_length = -1; // axis decides
    sweep.scenario_cfg = cfg.scenario_cfg;

    ForecastStore store;
    const ForecastStore* store_ptr = nullptr;
    const bool wants_pred =
        std::find(sweep.scenarios.begin(), sweep.scenarios.end(), ScenarioKind::Predicted) !=
        sweep.scenarios.end();
    if (wants_pred) {
        if (cfg.models_path.empty()) throw std::runtime_error("pred scenario needs --models");
        store = load_store(cfg.models_path);
        store_ptr = &store;
    }

    const SweepReport report = run_sweep(w.topo, w.catalog, ds, store_ptr, sweep);
    write_file(out_path(cfg, "sweep.csv"), sweep_to_csv(report));
    write_file(out_path(cfg, "sweep_meta.json"), sweep_sidecar_json(report));
    std::cout << "sweep rows: " << report.rows.size() << "\n";
    return kExitOk;
}

int run_export_lp(const RunConfig& cfg) {
    const LoadedWorld w = load_world(cfg);
    if (cfg.dataset_path.empty()) throw std::runtime_error("missing dataset path");
    const DemandDataset ds = load_dataset(cfg.dataset_path);

    std::shared_ptr<const Topology> topo = w.topo;
    if (cfg.server_capacity > 0.0)
        topo = std::make_shared<const Topology>(with_server_capacity(*w.topo, cfg.server_capacity));

    Rng rng(cfg.seed);
    Instance inst = build_instance(topo, w.catalog, ds, chain_for(cfg), rng);
    const int t_abs = (ds.config.periods - 1) * ds.config.samples_per_period;
    set_demand_values(inst, observed_view(ds, t_abs));

    PriorPlacement prior;
    const PriorPlacement* prior_ptr = nullptr;
    if (!cfg.prior_solution_path.empty()) {
        std::ifstream in(cfg.prior_solution_path);
        if (!in) throw std::runtime_error("cannot open prior solution: " + cfg.prior_solution_path);
        std::stringstream ss;
        ss << in.rdbuf();
        prior = to_prior(solution_from_json(ss.str()));
        prior_ptr = &prior;
    }
    const ObjectiveWeights weights =
        prior_ptr == nullptr ? ObjectiveWeights{0.0, 1.0, 1.0}
                             : make_weights(weights_from_string(cfg.weights), inst, prior_ptr);
    write_file(out_path(cfg, cfg.lp_out), export_lp(inst, prior_ptr, weights));
    std::cout << "lp: " << out_path(cfg, cfg.lp_out) << "\n";
    return kExitOk;
}

} // namespace vnfopt
