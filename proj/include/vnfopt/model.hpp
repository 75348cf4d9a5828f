#ifndef VNFOPT_MODEL_HPP
#define VNFOPT_MODEL_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vnfopt/paths.hpp"
#include "vnfopt/topology.hpp"

namespace vnfopt {

struct VnfSpec {
    int type = 0;
    double load_ratio = 1.0;  // processing load per traffic unit
    double sync_ratio = 0.0;  // sync traffic per unit of SFC traffic
    double overhead = 0.0;    // VM overhead, processing units per instance
    bool replicable = true;
    double d_proq_s = 0.003;    // queueing delay at full assigned load
    double d_prox_s = 0.005;    // utilization-dependent delay at u_x = 1
    double d_prox_min_s = 0.002; // load-independent minimum
    double d_pro_max_s = 0.010;  // max allowed processing delay
    double proc_capacity = 1000.0; // max processing load assignable to one instance
};

struct Demand {
    int id = 0;
    double value = 0.0; // traffic units
};

struct ServiceChain {
    int id = -1;
    NodeId src = -1;
    NodeId dst = -1;
    std::vector<VnfSpec> vnfs;
    std::vector<Demand> demands;
    double max_delay_s = 0.4;
    std::vector<PathId> admissible;

    double total_demand() const {
        double t = 0.0;
        for (const Demand& d : demands) t += d.value;
        return t;
    }
};

// How |Lambda_s| in the sync-traffic term is read: total offered traffic of
// the SFC (default) or the number of demands.
enum class SyncTrafficMode { TotalTraffic, DemandCount };

struct Instance {
    std::shared_ptr<const Topology> topology;
    std::shared_ptr<const PathCatalog> catalog;
    std::vector<ServiceChain> sfcs;
    SyncTrafficMode sync_mode = SyncTrafficMode::TotalTraffic;
    double downtime_per_migration_s = 0.0275;

    const Topology& topo() const { return *topology; }
    const PathCatalog& paths() const { return *catalog; }
};

// Decision state for one placement phase. Unassigned entries are -1; solvers
// are free to evaluate partially built (even infeasible) states.
struct PlacementSolution {
    std::vector<std::vector<PathId>> demand_path;                // [s][d]
    std::vector<std::vector<std::vector<ServerId>>> demand_server; // [s][v][d]
    std::vector<std::vector<std::vector<ServerId>>> vnf_servers;   // [s][v], sorted
    std::vector<std::vector<std::vector<PathId>>> sync_paths;      // [s][v], sorted

    static PlacementSolution empty_for(const Instance& inst);
    // re-derive vnf_servers as the union of demand assignments
    void rebuild_vnf_servers();
};

struct PriorPlacement {
    std::vector<std::vector<std::vector<ServerId>>> servers; // [s][v], sorted
    bool empty() const { return servers.empty(); }
};

struct ObjectiveWeights {
    double migration = 1.0;
    double replication = 1.0;
    double cloud = 1.0;
};

struct Violation {
    enum class Kind {
        UnroutedDemand,
        PathNotAdmissible,
        UnassignedVnf,
        ServerNotOnPath,
        OrderViolation,
        ReplicabilityViolation,
        ReplicaCountExceedsPaths,
        InstanceWithoutDemand,
        DemandServerNotListed,
        SyncPathMissing,
        SyncPathUnexpected,
        LinkOverCapacity,
        ServerOverCapacity,
        ProcessingDelayExceeded,
        DelayExceeded,
    };
    Kind kind;
    int s = -1, v = -1, d = -1;
    int server = -1, link = -1, path = -1;
    double value = 0.0, limit = 0.0;

    std::string describe() const;
};

struct ObjectiveBreakdown {
    int migrations = 0;
    int replications = 0;
    int cloud_vnfs = 0;
    double value = 0.0;
};

struct DelayBreakdown {
    double propagation_s = 0.0;
    double processing_s = 0.0;
    double downtime_s = 0.0;
    double total_s() const { return propagation_s + processing_s + downtime_s; }
};

struct LinkUsage {
    std::vector<double> traffic; // demand + sync traffic per link
    std::vector<double> util;    // 0 on unbounded (cloud) links
};

struct ServerUsage {
    std::vector<double> load; // gamma_x
    std::vector<double> util; // 0 on unbounded (cloud) servers
};

struct MetricsReport {
    ObjectiveBreakdown objective;
    LinkUsage links;
    ServerUsage servers;
    std::vector<std::vector<std::optional<DelayBreakdown>>> demand_delay; // [s][d]
    double mean_link_util = 0.0;   // non-cloud links
    double mean_server_util = 0.0; // non-cloud servers
    double mean_delay_s = 0.0;     // over fully assigned demands
    std::vector<Violation> violations;
};

// capacity/delay feasibility comparisons allow this much relative slack
inline constexpr double kFeasEps = 1e-9;

std::vector<Violation> check_feasibility(const PlacementSolution& sol, const Instance& inst,
                                         const PriorPlacement* prior = nullptr);

LinkUsage link_utilization(const PlacementSolution& sol, const Instance& inst);
ServerUsage server_load(const PlacementSolution& sol, const Instance& inst);

// Processing delay of VNF v of SFC s on server x. Throws if the VNF is not
// placed there. The reported value is kept even when it exceeds d_pro_max
// (check_feasibility lists the violation).
double processing_delay_s(const PlacementSolution& sol, const Instance& inst, int s, int v,
                          ServerId x);

double downtime_s(const PlacementSolution& sol, const Instance& inst,
                  const PriorPlacement* prior, int s);

DelayBreakdown demand_delay(const PlacementSolution& sol, const Instance& inst,
                            const PriorPlacement* prior, int s, int d);

ObjectiveBreakdown objective(const PlacementSolution& sol, const Instance& inst,
                             const PriorPlacement* prior, const ObjectiveWeights& w);

PriorPlacement to_prior(const PlacementSolution& sol);

MetricsReport build_metrics(const PlacementSolution& sol, const Instance& inst,
                            const PriorPlacement* prior, const ObjectiveWeights& w);

// Directed (original-node -> replica-node) pairs that need a sync path for
// one VNF's instance set; the original is the lowest-indexed instance.
std::vector<std::pair<NodeId, NodeId>> required_sync_pairs(const Topology& topo,
                                                           const std::vector<ServerId>& instances);

std::string solution_to_json(const PlacementSolution& sol);
PlacementSolution solution_from_json(const std::string& text);

std::string metrics_to_json(const MetricsReport& m);
std::string metrics_to_csv_row(const MetricsReport& m);

} // namespace vnfopt

#endif
