#include <algorithm>
#include <cmath>
#include <set>

#include "solver_state.hpp"

namespace vnfopt {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Heuristic: return "heuristic";
        case SolveStatus::Infeasible: return "infeasible";
    }
    return "?";
}

PlacementState::PlacementState(const Instance& instance)
    : inst(&instance),
      sol(PlacementSolution::empty_for(instance)),
      link_demand(instance.topo().links.size(), 0.0),
      link_sync(instance.topo().links.size(), 0.0),
      gamma(instance.topo().servers.size(), 0.0),
      hosted(instance.topo().servers.size()) {
    assigned.resize(instance.sfcs.size());
    for (size_t s = 0; s < instance.sfcs.size(); ++s)
        assigned[s].resize(instance.sfcs[s].vnfs.size());
}

bool PlacementState::link_fits(PathId p, double amount) const {
    for (LinkId l : inst->paths().path(p).links) {
        const Link& link = inst->topo().links[l];
        if (std::isinf(link.capacity)) continue;
        if (link_total(l) + amount > link.capacity + 1e-12) return false;
    }
    return true;
}

bool PlacementState::server_can_host(int s, int v, ServerId x, double demand_value) const {
    const VnfSpec& vnf = inst->sfcs[s].vnfs[v];
    const Server& server = inst->topo().servers[x];
    const auto& per_server = assigned[s][v];
    const auto it = per_server.find(x);
    const bool new_instance = it == per_server.end();
    const double here = new_instance ? 0.0 : it->second;

    const double add = vnf.load_ratio * demand_value + (new_instance ? vnf.overhead : 0.0);
    const double new_gamma = gamma[x] + add;
    double new_util = 0.0;
    if (!std::isinf(server.capacity)) {
        if (new_gamma > server.capacity + 1e-12) return false;
        new_util = new_gamma / server.capacity;
    }
    auto delay_ok = [&](const VnfSpec& spec, double load) {
        const double d = spec.d_proq_s * spec.load_ratio * load / spec.proc_capacity +
                         spec.d_prox_min_s + spec.d_prox_s * new_util;
        return d <= spec.d_pro_max_s + 1e-12;
    };
    if (!delay_ok(vnf, here + demand_value)) return false;
    for (const auto& [s2, v2] : hosted[x]) {
        if (s2 == s && v2 == v) continue;
        if (!delay_ok(inst->sfcs[s2].vnfs[v2], assigned[s2][v2].at(x))) return false;
    }
    return true;
}

void PlacementState::route_demand(int s, int d, PathId p) {
    sol.demand_path[s][d] = p;
    const double value = inst->sfcs[s].demands[d].value;
    for (LinkId l : inst->paths().path(p).links) link_demand[l] += value;
}

void PlacementState::unroute_demand(int s, int d) {
    const PathId p = sol.demand_path[s][d];
    if (p < 0) return;
    const double value = inst->sfcs[s].demands[d].value;
    for (LinkId l : inst->paths().path(p).links) link_demand[l] -= value;
    sol.demand_path[s][d] = -1;
}

void PlacementState::assign_vnf(int s, int v, int d, ServerId x) {
    const VnfSpec& vnf = inst->sfcs[s].vnfs[v];
    const double value = inst->sfcs[s].demands[d].value;
    auto [it, created] = assigned[s][v].emplace(x, 0.0);
    it->second += value;
    gamma[x] += vnf.load_ratio * value;
    if (created) {
        gamma[x] += vnf.overhead;
        auto& instances = sol.vnf_servers[s][v];
        instances.insert(std::lower_bound(instances.begin(), instances.end(), x), x);
        hosted[x].emplace_back(s, v);
    }
    sol.demand_server[s][v][d] = x;
}

void PlacementState::move_assignment(int s, int v, int d, ServerId y) {
    const ServerId x = sol.demand_server[s][v][d];
    const VnfSpec& vnf = inst->sfcs[s].vnfs[v];
    const double value = inst->sfcs[s].demands[d].value;
    auto it = assigned[s][v].find(x);
    it->second -= value;
    gamma[x] -= vnf.load_ratio * value;
    sol.demand_server[s][v][d] = -1;
    assign_vnf(s, v, d, y);
    const auto& row = sol.demand_server[s][v];
    if (std::find(row.begin(), row.end(), x) == row.end()) remove_instance(s, v, x);
}

void PlacementState::remove_instance(int s, int v, ServerId x) {
    auto it = assigned[s][v].find(x);
    if (it == assigned[s][v].end()) return;
    gamma[x] -= inst->sfcs[s].vnfs[v].load_ratio * it->second;
    gamma[x] -= inst->sfcs[s].vnfs[v].overhead;
    assigned[s][v].erase(it);
    auto& instances = sol.vnf_servers[s][v];
    instances.erase(std::remove(instances.begin(), instances.end(), x), instances.end());
    auto& h = hosted[x];
    h.erase(std::remove(h.begin(), h.end(), std::make_pair(s, v)), h.end());
}

void PlacementState::refresh_sync(int s) {
    for (size_t v = 0; v < inst->sfcs[s].vnfs.size(); ++v) {
        std::set<PathId> wanted;
        for (const auto& [n, m] : required_sync_pairs(inst->topo(), sol.vnf_servers[s][v]))
            wanted.insert(inst->paths().sync_path[n][m]);
        const double amount = inst->sfcs[s].vnfs[v].sync_ratio *
                              (inst->sync_mode == SyncTrafficMode::TotalTraffic
                                   ? inst->sfcs[s].total_demand()
                                   : static_cast<double>(inst->sfcs[s].demands.size()));
        auto& current = sol.sync_paths[s][v];
        for (PathId p : current) {
            if (!wanted.count(p))
                for (LinkId l : inst->paths().path(p).links) link_sync[l] -= amount;
        }
        for (PathId p : wanted) {
            if (!std::binary_search(current.begin(), current.end(), p))
                for (LinkId l : inst->paths().path(p).links) link_sync[l] += amount;
        }
        current.assign(wanted.begin(), wanted.end());
    }
}

bool PlacementState::order_ok(int s, int d) const {
    const PathId p = sol.demand_path[s][d];
    if (p < 0) return true;
    const Path& path = inst->paths().path(p);
    int prev = 0;
    for (size_t v = 0; v < inst->sfcs[s].vnfs.size(); ++v) {
        const ServerId x = sol.demand_server[s][v][d];
        if (x < 0) continue;
        const int pos = path.node_position(inst->topo().servers[x].node);
        if (pos < 0 || pos < prev) return false;
        prev = pos;
    }
    return true;
}

bool PlacementState::links_overloaded() const {
    for (const Link& l : inst->topo().links) {
        if (std::isinf(l.capacity)) continue;
        if (link_total(l.id) > l.capacity + 1e-9) return true;
    }
    return false;
}

std::vector<PathId> admissible_paths(const PlacementState& st, int s, double value) {
    std::vector<PathId> out;
    for (PathId p : st.inst->sfcs[s].admissible)
        if (st.link_fits(p, value)) out.push_back(p);
    return out;
}

SolveResult finish_heuristic(PlacementState&& st, const SolveRequest& req, bool placed_everything,
                             std::vector<std::string> notes, SolveStats stats) {
    SolveResult res;
    res.solution = std::move(st.sol);
    res.metrics = build_metrics(res.solution, *req.instance, req.prior, req.weights);
    res.status = placed_everything && res.metrics.violations.empty() ? SolveStatus::Heuristic
                                                                     : SolveStatus::Infeasible;
    res.stats = stats;
    res.notes = std::move(notes);
    return res;
}

ObjectiveWeights make_weights(WeightsMode mode, const Instance& inst, const PriorPlacement* prior) {
    if (mode == WeightsMode::Joint) return ObjectiveWeights{1.0, 1.0, 1.0};
    double max_instances = 0.0, max_migrations = 0.0, total_vnfs = 0.0;
    for (size_t s = 0; s < inst.sfcs.size(); ++s) {
        const auto& sfc = inst.sfcs[s];
        total_vnfs += static_cast<double>(sfc.vnfs.size());
        max_instances += static_cast<double>(sfc.vnfs.size() * sfc.admissible.size());
        if (prior != nullptr && !prior->empty() && s < prior->servers.size())
            for (const auto& xs : prior->servers[s]) max_migrations += static_cast<double>(xs.size());
    }
    const double u_m = max_migrations;
    const double u_r = std::max(0.0, max_instances - total_vnfs);
    const double u_c = max_instances;
    auto secondary = [](double u) { return 1.0 / (2.0 * (1.0 + u)); };
    switch (mode) {
        case WeightsMode::MinMigrations: return {1.0, secondary(u_r), secondary(u_c)};
        case WeightsMode::MinReplications: return {secondary(u_m), 1.0, secondary(u_c)};
        case WeightsMode::MinCloud: return {secondary(u_m), secondary(u_r), 1.0};
        default: return {1.0, 1.0, 1.0};
    }
}

} // namespace vnfopt
