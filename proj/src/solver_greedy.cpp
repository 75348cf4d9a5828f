#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "solver_state.hpp"

namespace vnfopt {

namespace {

struct GreedyCtx {
    const Instance& inst;
    const PriorPlacement* prior;
    const PlacementSolution* prior_solution;
};

// Alg. 3: already-used path for this demand in the initial placement, any
// initial-placement path for s, any path already used for s, else shortest.
PathId choose_path(const GreedyCtx& ctx, const PlacementState& st, int s, int d,
                   const std::vector<PathId>& candidates) {
    if (ctx.prior_solution != nullptr) {
        const PathId p0 = ctx.prior_solution->demand_path[s][d];
        if (p0 >= 0 && std::find(candidates.begin(), candidates.end(), p0) != candidates.end())
            return p0;
        for (PathId p : candidates) {
            const auto& row = ctx.prior_solution->demand_path[s];
            if (std::find(row.begin(), row.end(), p) != row.end()) return p;
        }
    }
    for (PathId p : candidates) {
        const auto& row = st.sol.demand_path[s];
        if (std::find(row.begin(), row.end(), p) != row.end()) return p;
    }
    PathId best = candidates.front();
    for (PathId p : candidates)
        if (ctx.inst.paths().path(p).delay_s < ctx.inst.paths().path(best).delay_s) best = p;
    return best;
}

// Alg. 4. `last_attempt` is A; returns -1 when no server is acceptable.
ServerId choose_server(const GreedyCtx& ctx, const PlacementState& st, int s, int v, int d,
                       PathId p, int from_pos, bool last_attempt) {
    const Path& path = ctx.inst.paths().path(p);
    const double value = ctx.inst.sfcs[s].demands[d].value;
    std::vector<ServerId> pool;
    for (ServerId x : path.servers) {
        if (path.node_position(ctx.inst.topo().servers[x].node) < from_pos) continue;
        if (st.server_can_host(s, v, x, value)) pool.push_back(x);
    }
    if (pool.empty()) return -1;

    ServerId cloud = -1;
    size_t cloud_idx = 0;
    for (size_t i = 0; i < pool.size(); ++i) {
        if (ctx.inst.topo().servers[pool[i]].is_cloud) {
            cloud = pool[i];
            cloud_idx = i;
            break;
        }
    }
    auto index_of = [&](ServerId x) {
        return static_cast<size_t>(std::find(pool.begin(), pool.end(), x) - pool.begin());
    };
    auto check_position = [&](ServerId x) -> ServerId {
        if (last_attempt && cloud >= 0 && index_of(x) < cloud_idx) return x;
        if (last_attempt && cloud >= 0 && index_of(x) > cloud_idx) return cloud;
        return x;
    };

    if (ctx.prior_solution != nullptr) {
        const ServerId x = ctx.prior_solution->demand_server[s][v][d];
        if (x >= 0 && std::find(pool.begin(), pool.end(), x) != pool.end())
            return check_position(x);
    }
    if (ctx.prior != nullptr && !ctx.prior->empty()) {
        const auto& prev = ctx.prior->servers[s][v];
        for (ServerId x : pool)
            if (std::binary_search(prev.begin(), prev.end(), x)) return check_position(x);
    }
    {
        const auto& current = st.sol.vnf_servers[s][v];
        for (ServerId x : pool)
            if (std::binary_search(current.begin(), current.end(), x)) return check_position(x);
    }
    return last_attempt ? pool.front() : -1;
}

bool attempt_demand(const GreedyCtx& ctx, PlacementState& st, int s, int d, PathId p,
                    bool last_attempt) {
    int pos = 0;
    for (size_t v = 0; v < ctx.inst.sfcs[s].vnfs.size(); ++v) {
        const ServerId x = choose_server(ctx, st, s, static_cast<int>(v), d, p, pos, last_attempt);
        if (x < 0) return false;
        st.assign_vnf(s, static_cast<int>(v), d, x);
        pos = ctx.inst.paths().path(p).node_position(ctx.inst.topo().servers[x].node);
    }
    st.route_demand(s, d, p);
    return true;
}

// Sync traffic overloaded a link: try to fold replicas of SFC s back onto a
// server the VNF already uses. Demands are only moved when path membership,
// order, capacity and the re-derived sync traffic all stay feasible.
bool rollback_replicas(PlacementState& st, int s) {
    const Instance& inst = *st.inst;
    for (size_t v = 0; v < inst.sfcs[s].vnfs.size(); ++v) {
        const auto instances = st.sol.vnf_servers[s][v]; // copy, mutated below
        if (instances.size() < 2) continue;
        for (size_t i = instances.size(); i-- > 1;) {
            const ServerId from = instances[i];
            for (ServerId to : st.sol.vnf_servers[s][v]) {
                if (to == from) continue;
                PlacementState probe = st;
                bool ok = true;
                for (size_t d = 0; ok && d < inst.sfcs[s].demands.size(); ++d) {
                    if (probe.sol.demand_server[s][v][d] != from) continue;
                    const PathId p = probe.sol.demand_path[s][d];
                    const Path& path = inst.paths().path(p);
                    if (path.node_position(inst.topo().servers[to].node) < 0 ||
                        !probe.server_can_host(s, static_cast<int>(v),
                                               to, inst.sfcs[s].demands[d].value)) {
                        ok = false;
                        break;
                    }
                    probe.move_assignment(s, static_cast<int>(v), static_cast<int>(d), to);
                    ok = probe.order_ok(s, static_cast<int>(d));
                }
                if (!ok) continue;
                probe.refresh_sync(s);
                if (probe.links_overloaded()) continue;
                st = std::move(probe);
                if (!st.links_overloaded()) return true;
                break; // this replica folded; move on to remaining offenders
            }
        }
    }
    return !st.links_overloaded();
}

} // namespace

SolveResult solve_greedy(const SolveRequest& req) {
    const auto t0 = std::chrono::steady_clock::now();
    const Instance& inst = *req.instance;
    GreedyCtx ctx{inst, req.prior, req.prior_solution};
    PlacementState st(inst);
    SolveStats stats;
    std::vector<std::string> notes;
    bool all_placed = true;

    // services with lower total demand first
    std::vector<int> order(inst.sfcs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return inst.sfcs[a].total_demand() < inst.sfcs[b].total_demand();
    });

    for (int s : order) {
        for (size_t d = 0; d < inst.sfcs[s].demands.size(); ++d) {
            ++stats.placement_attempts;
            std::vector<PathId> remaining =
                admissible_paths(st, s, inst.sfcs[s].demands[d].value);
            bool placed = false;
            while (!remaining.empty()) {
                const PathId p = choose_path(ctx, st, s, static_cast<int>(d), remaining);
                const bool last_attempt = remaining.size() == 1;
                PlacementState scratch = st;
                if (attempt_demand(ctx, scratch, s, static_cast<int>(d), p, last_attempt)) {
                    st = std::move(scratch);
                    placed = true;
                    break;
                }
                remaining.erase(std::remove(remaining.begin(), remaining.end(), p),
                                remaining.end());
            }
            if (!placed) {
                std::ostringstream os;
                os << "no admissible path/server for demand " << d << " of SFC " << s;
                notes.push_back(os.str());
                all_placed = false;
            }
        }
        st.refresh_sync(s);
        if (st.links_overloaded() && !rollback_replicas(st, s)) {
            std::ostringstream os;
            os << "synchronization traffic of SFC " << s << " exceeds link capacity";
            notes.push_back(os.str());
            all_placed = false;
        }
    }
    stats.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return finish_heuristic(std::move(st), req, all_placed, std::move(notes), stats);
}

} // namespace vnfopt
