#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "solver_state.hpp"

namespace vnfopt {

namespace {

struct ExactSearch {
    const Instance& inst;
    const SolveRequest& req;
    std::vector<std::pair<int, int>> demands; // (s, d) in lexicographic order

    PlacementState st;
    std::vector<std::vector<int>> assigned_count; // demands assigned per (s,v)

    // partial objective lower bound, all monotone under further assignment
    int lb_migrations = 0;
    int lb_replications = 0;
    int lb_cloud = 0;

    long nodes = 0;
    bool budget_exhausted = false;

    double best_value = kUnbounded;
    PlacementSolution best;
    bool found = false;

    explicit ExactSearch(const SolveRequest& r) : inst(*r.instance), req(r), st(*r.instance) {
        for (size_t s = 0; s < inst.sfcs.size(); ++s)
            for (size_t d = 0; d < inst.sfcs[s].demands.size(); ++d)
                demands.emplace_back(static_cast<int>(s), static_cast<int>(d));
        assigned_count.resize(inst.sfcs.size());
        for (size_t s = 0; s < inst.sfcs.size(); ++s)
            assigned_count[s].assign(inst.sfcs[s].vnfs.size(), 0);
    }

    double bound_value() const {
        return req.weights.migration * lb_migrations + req.weights.replication * lb_replications +
               req.weights.cloud * lb_cloud;
    }

    int prior_abandoned(int s, int v) const {
        if (req.prior == nullptr || req.prior->empty()) return 0;
        int count = 0;
        const auto& instances = st.sol.vnf_servers[s][v];
        for (ServerId x : req.prior->servers[s][v])
            if (!std::binary_search(instances.begin(), instances.end(), x)) ++count;
        return count;
    }

    void leaf() {
        PlacementState complete = st;
        for (size_t s = 0; s < inst.sfcs.size(); ++s) complete.refresh_sync(static_cast<int>(s));
        if (!check_feasibility(complete.sol, inst, req.prior).empty()) return;
        const ObjectiveBreakdown obj = objective(complete.sol, inst, req.prior, req.weights);
        if (obj.value < best_value) {
            best_value = obj.value;
            best = complete.sol;
            found = true;
        }
    }

    void assign_chain(size_t k, int s, int d, PathId p, size_t v, int from_pos) {
        if (budget_exhausted) return;
        if (v == inst.sfcs[s].vnfs.size()) {
            search(k + 1);
            return;
        }
        const Path& path = inst.paths().path(p);
        const double value = inst.sfcs[s].demands[d].value;
        for (ServerId x : path.servers) {
            const int pos = path.node_position(inst.topo().servers[x].node);
            if (pos < from_pos) continue;
            if (!st.server_can_host(s, static_cast<int>(v), x, value)) continue;
            if (++nodes > req.exact_limits.node_budget) {
                budget_exhausted = true;
                return;
            }

            const bool creates = st.assigned[s][v].find(x) == st.assigned[s][v].end();
            const bool completes =
                assigned_count[s][v] + 1 == static_cast<int>(inst.sfcs[s].demands.size());
            st.assign_vnf(s, static_cast<int>(v), d, x);
            ++assigned_count[s][v];
            const int old_mig = lb_migrations;
            if (creates) {
                if (st.sol.vnf_servers[s][v].size() > 1) ++lb_replications;
                if (inst.topo().servers[x].is_cloud) ++lb_cloud;
            }
            if (completes) lb_migrations += prior_abandoned(s, static_cast<int>(v));

            const bool replicable_ok = inst.sfcs[s].vnfs[v].replicable ||
                                       st.sol.vnf_servers[s][v].size() <= 1;
            if (replicable_ok && bound_value() < best_value) {
                assign_chain(k, s, d, p, v + 1, pos);
            }

            lb_migrations = old_mig;
            if (creates) {
                if (st.sol.vnf_servers[s][v].size() > 1) --lb_replications;
                if (inst.topo().servers[x].is_cloud) --lb_cloud;
            }
            --assigned_count[s][v];
            // undo the assignment
            auto it = st.assigned[s][v].find(x);
            it->second -= value;
            st.gamma[x] -= inst.sfcs[s].vnfs[v].load_ratio * value;
            st.sol.demand_server[s][v][d] = -1;
            if (creates) st.remove_instance(s, static_cast<int>(v), x);
        }
    }

    void search(size_t k) {
        if (budget_exhausted) return;
        if (k == demands.size()) {
            leaf();
            return;
        }
        const auto [s, d] = demands[k];
        const double value = inst.sfcs[s].demands[d].value;
        for (PathId p : inst.sfcs[s].admissible) {
            if (!st.link_fits(p, value)) continue;
            st.route_demand(s, d, p);
            assign_chain(k, s, d, p, 0, 0);
            st.unroute_demand(s, d);
            if (budget_exhausted) return;
        }
    }
};

} // namespace

SolveResult solve_exact(const SolveRequest& req) {
    const auto t0 = std::chrono::steady_clock::now();
    const Instance& inst = *req.instance;

    int total_demands = 0;
    for (const auto& sfc : inst.sfcs) {
        total_demands += static_cast<int>(sfc.demands.size());
        if (static_cast<int>(sfc.admissible.size()) > req.exact_limits.max_paths)
            throw std::invalid_argument("instance exceeds exact solver path limit");
    }
    if (total_demands > req.exact_limits.max_demands)
        throw std::invalid_argument("instance exceeds exact solver demand limit");
    if (static_cast<int>(inst.topo().servers.size()) > req.exact_limits.max_servers)
        throw std::invalid_argument("instance exceeds exact solver server limit");

    ExactSearch search(req);
    search.search(0);

    SolveResult res;
    res.stats.nodes_explored = search.nodes;
    if (search.found) {
        res.solution = search.best;
        res.status = search.budget_exhausted ? SolveStatus::Heuristic : SolveStatus::Optimal;
    } else {
        res.solution = PlacementSolution::empty_for(inst);
        res.status = SolveStatus::Infeasible;
        if (search.budget_exhausted) res.notes.push_back("node budget exhausted before any solution");
    }
    if (search.budget_exhausted && search.found)
        res.notes.push_back("node budget exhausted; best found returned");
    res.metrics = build_metrics(res.solution, inst, req.prior, req.weights);
    res.stats.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

} // namespace vnfopt
