#ifndef VNFOPT_SOLVER_STATE_HPP
#define VNFOPT_SOLVER_STATE_HPP

#include <map>
#include <utility>
#include <vector>

#include "vnfopt/model.hpp"
#include "vnfopt/solvers.hpp"

namespace vnfopt {

// Incremental placement bookkeeping shared by the solvers. Copyable so an
// attempt can run on a scratch copy and be committed by swap.
struct PlacementState {
    const Instance* inst;
    PlacementSolution sol;
    std::vector<double> link_demand; // routed demand traffic per link
    std::vector<double> link_sync;   // sync traffic per link
    std::vector<double> gamma;       // server processing load
    std::vector<std::vector<std::map<ServerId, double>>> assigned; // [s][v] traffic per instance
    std::vector<std::vector<std::pair<int, int>>> hosted;          // per server: (s,v) instances

    explicit PlacementState(const Instance& instance);

    double link_total(LinkId l) const { return link_demand[l] + link_sync[l]; }
    bool link_fits(PathId p, double amount) const;

    // Capacity and processing-delay cap check: can (s,v) serve one more demand
    // of the given value on x without exceeding the server capacity or pushing
    // any instance hosted on x past its max processing delay.
    bool server_can_host(int s, int v, ServerId x, double demand_value) const;

    void route_demand(int s, int d, PathId p);
    void unroute_demand(int s, int d);
    void assign_vnf(int s, int v, int d, ServerId x);
    // move one demand's (s,v) assignment from its current server to y
    void move_assignment(int s, int v, int d, ServerId y);
    // drop instance x of (s,v); its demands must have been reassigned first
    void remove_instance(int s, int v, ServerId x);
    // re-derive sync path sets of SFC s from its instance sets
    void refresh_sync(int s);

    bool order_ok(int s, int d) const;
    bool links_overloaded() const;
};

std::vector<PathId> admissible_paths(const PlacementState& st, int s, double value);

// Final feasibility check decides the status (violations downgrade to
// Infeasible even if every demand was placed).
SolveResult finish_heuristic(PlacementState&& st, const SolveRequest& req, bool placed_everything,
                             std::vector<std::string> notes, SolveStats stats);

} // namespace vnfopt

#endif
