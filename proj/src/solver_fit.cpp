#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>

#include "solver_state.hpp"
#include "vnfopt/rng.hpp"

namespace vnfopt {

namespace {

// servers on p usable by (s,v,d) at or after position `from_pos`, path order
std::vector<ServerId> available_servers(const PlacementState& st, int s, int v, int d, PathId p,
                                        int from_pos) {
    const Path& path = st.inst->paths().path(p);
    const double value = st.inst->sfcs[s].demands[d].value;
    std::vector<ServerId> out;
    for (ServerId x : path.servers) {
        if (path.node_position(st.inst->topo().servers[x].node) < from_pos) continue;
        if (st.server_can_host(s, v, x, value)) out.push_back(x);
    }
    return out;
}

// first-fit the chain suffix [v_from, V) onto p, mutating st; false on failure
bool first_fit_suffix(PlacementState& st, int s, int d, PathId p, size_t v_from, int from_pos) {
    const auto& sfc = st.inst->sfcs[s];
    int pos = from_pos;
    for (size_t v = v_from; v < sfc.vnfs.size(); ++v) {
        const auto servers = available_servers(st, s, static_cast<int>(v), d, p, pos);
        if (servers.empty()) return false;
        const ServerId x = servers.front();
        st.assign_vnf(s, static_cast<int>(v), d, x);
        pos = st.inst->paths().path(p).node_position(st.inst->topo().servers[x].node);
    }
    return true;
}

// Random-Fit chain placement: every pick is uniform among available servers
// that still leave room for the rest of the chain further along the path.
bool random_fit_chain(PlacementState& st, int s, int d, PathId p, Rng& rng) {
    const auto& sfc = st.inst->sfcs[s];
    int pos = 0;
    for (size_t v = 0; v < sfc.vnfs.size(); ++v) {
        std::vector<ServerId> servers = available_servers(st, s, static_cast<int>(v), d, p, pos);
        bool placed = false;
        while (!servers.empty()) {
            const size_t pick = static_cast<size_t>(rng.uniform_int(0, static_cast<std::int64_t>(servers.size()) - 1));
            const ServerId x = servers[pick];
            const int x_pos = st.inst->paths().path(p).node_position(st.inst->topo().servers[x].node);
            PlacementState probe = st;
            probe.assign_vnf(s, static_cast<int>(v), d, x);
            if (first_fit_suffix(probe, s, d, p, v + 1, x_pos)) {
                st.assign_vnf(s, static_cast<int>(v), d, x);
                pos = x_pos;
                placed = true;
                break;
            }
            servers.erase(servers.begin() + static_cast<long>(pick));
        }
        if (!placed) return false;
    }
    return true;
}

SolveResult solve_fit(const SolveRequest& req, bool random) {
    const auto t0 = std::chrono::steady_clock::now();
    const Instance& inst = *req.instance;
    PlacementState st(inst);
    Rng rng(req.rng_seed);
    SolveStats stats;
    std::vector<std::string> notes;
    bool all_placed = true;

    for (size_t s = 0; s < inst.sfcs.size(); ++s) {
        for (size_t d = 0; d < inst.sfcs[s].demands.size(); ++d) {
            ++stats.placement_attempts;
            std::vector<PathId> candidates =
                admissible_paths(st, static_cast<int>(s), inst.sfcs[s].demands[d].value);
            if (random) {
                for (size_t i = candidates.size(); i > 1; --i)
                    std::swap(candidates[i - 1],
                              candidates[static_cast<size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
            }
            bool placed = false;
            for (PathId p : candidates) {
                PlacementState scratch = st;
                const bool ok = random ? random_fit_chain(scratch, static_cast<int>(s),
                                                          static_cast<int>(d), p, rng)
                                       : first_fit_suffix(scratch, static_cast<int>(s),
                                                          static_cast<int>(d), p, 0, 0);
                if (!ok) continue;
                scratch.route_demand(static_cast<int>(s), static_cast<int>(d), p);
                scratch.refresh_sync(static_cast<int>(s));
                st = std::move(scratch);
                placed = true;
                break;
            }
            if (!placed) {
                std::ostringstream os;
                os << "no admissible path/server for demand " << d << " of SFC " << s;
                notes.push_back(os.str());
                all_placed = false;
            }
        }
    }
    stats.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return finish_heuristic(std::move(st), req, all_placed, std::move(notes), stats);
}

} // namespace

SolveResult solve_first_fit(const SolveRequest& req) { return solve_fit(req, false); }

SolveResult solve_random_fit(const SolveRequest& req) { return solve_fit(req, true); }

} // namespace vnfopt
