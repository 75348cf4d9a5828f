#include "vnfopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace vnfopt {

PlacementSolution PlacementSolution::empty_for(const Instance& inst) {
    PlacementSolution sol;
    sol.demand_path.resize(inst.sfcs.size());
    sol.demand_server.resize(inst.sfcs.size());
    sol.vnf_servers.resize(inst.sfcs.size());
    sol.sync_paths.resize(inst.sfcs.size());
    for (size_t s = 0; s < inst.sfcs.size(); ++s) {
        const auto& sfc = inst.sfcs[s];
        sol.demand_path[s].assign(sfc.demands.size(), -1);
        sol.demand_server[s].assign(sfc.vnfs.size(),
                                    std::vector<ServerId>(sfc.demands.size(), -1));
        sol.vnf_servers[s].resize(sfc.vnfs.size());
        sol.sync_paths[s].resize(sfc.vnfs.size());
    }
    return sol;
}

void PlacementSolution::rebuild_vnf_servers() {
    for (size_t s = 0; s < demand_server.size(); ++s) {
        for (size_t v = 0; v < demand_server[s].size(); ++v) {
            std::set<ServerId> uniq;
            for (ServerId x : demand_server[s][v])
                if (x >= 0) uniq.insert(x);
            vnf_servers[s][v].assign(uniq.begin(), uniq.end());
        }
    }
}

std::string Violation::describe() const {
    static const char* names[] = {
        "unrouted demand",        "path not admissible",      "unassigned VNF",
        "server not on path",     "VNF order violated",       "non-replicable VNF replicated",
        "replicas exceed paths",  "instance without demand",  "demand server not listed",
        "sync path missing",      "sync path unexpected",     "link over capacity",
        "server over capacity",   "processing delay exceeded", "service delay exceeded",
    };
    std::ostringstream os;
    os << names[static_cast<int>(kind)];
    if (s >= 0) os << " s=" << s;
    if (v >= 0) os << " v=" << v;
    if (d >= 0) os << " d=" << d;
    if (server >= 0) os << " x=" << server;
    if (link >= 0) os << " l=" << link;
    if (path >= 0) os << " p=" << path;
    if (limit > 0.0) os << " (" << value << " > " << limit << ")";
    return os.str();
}

namespace {

void check_shape(const PlacementSolution& sol, const Instance& inst) {
    if (sol.demand_path.size() != inst.sfcs.size() ||
        sol.demand_server.size() != inst.sfcs.size() ||
        sol.vnf_servers.size() != inst.sfcs.size() || sol.sync_paths.size() != inst.sfcs.size())
        throw std::out_of_range("solution shape does not match instance");
    for (size_t s = 0; s < inst.sfcs.size(); ++s) {
        const auto& sfc = inst.sfcs[s];
        if (sol.demand_path[s].size() != sfc.demands.size() ||
            sol.demand_server[s].size() != sfc.vnfs.size() ||
            sol.vnf_servers[s].size() != sfc.vnfs.size() ||
            sol.sync_paths[s].size() != sfc.vnfs.size())
            throw std::out_of_range("solution shape does not match SFC " + std::to_string(s));
        for (const auto& row : sol.demand_server[s])
            if (row.size() != sfc.demands.size())
                throw std::out_of_range("demand_server shape mismatch in SFC " + std::to_string(s));
    }
    const int nservers = static_cast<int>(inst.topo().servers.size());
    const int npaths = static_cast<int>(inst.paths().paths.size());
    for (size_t s = 0; s < inst.sfcs.size(); ++s) {
        for (PathId p : sol.demand_path[s])
            if (p >= npaths) throw std::out_of_range("path id out of range");
        for (const auto& row : sol.demand_server[s])
            for (ServerId x : row)
                if (x >= nservers) throw std::out_of_range("server id out of range");
        for (const auto& xs : sol.vnf_servers[s])
            for (ServerId x : xs)
                if (x < 0 || x >= nservers) throw std::out_of_range("server id out of range");
        for (const auto& ps : sol.sync_paths[s])
            for (PathId p : ps)
                if (p < 0 || p >= npaths) throw std::out_of_range("path id out of range");
    }
}

double sync_amount(const Instance& inst, int s, int v) {
    const auto& sfc = inst.sfcs[s];
    const double lam = inst.sync_mode == SyncTrafficMode::TotalTraffic
                           ? sfc.total_demand()
                           : static_cast<double>(sfc.demands.size());
    return sfc.vnfs[v].sync_ratio * lam;
}

// processing delay given precomputed server utilization
double processing_delay_at(const PlacementSolution& sol, const Instance& inst, int s, int v,
                           ServerId x, double server_util) {
    const auto& sfc = inst.sfcs[s];
    const VnfSpec& vnf = sfc.vnfs[v];
    double assigned = 0.0;
    for (size_t d = 0; d < sfc.demands.size(); ++d)
        if (sol.demand_server[s][v][d] == x) assigned += sfc.demands[d].value;
    return vnf.d_proq_s * (vnf.load_ratio * assigned) / vnf.proc_capacity + vnf.d_prox_min_s +
           vnf.d_prox_s * server_util;
}

} // namespace

LinkUsage link_utilization(const PlacementSolution& sol, const Instance& inst) {
    check_shape(sol, inst);
    const Topology& topo = inst.topo();
    LinkUsage usage;
    usage.traffic.assign(topo.links.size(), 0.0);
    for (size_t s = 0; s < inst.sfcs.size(); ++s) {
        const auto& sfc = inst.sfcs[s];
        for (size_t d = 0; d < sfc.demands.size(); ++d) {
            const PathId p = sol.demand_path[s][d];
            if (p < 0) continue;
            for (LinkId l : inst.paths().path(p).links) usage.traffic[l] += sfc.demands[d].value;
        }
        for (size_t v = 0; v < sfc.vnfs.size(); ++v) {
            const double amount = sync_amount(inst, static_cast<int>(s), static_cast<int>(v));
            for (PathId p : sol.sync_paths[s][v])
                for (LinkId l : inst.paths().path(p).links) usage.traffic[l] += amount;
        }
    }
    usage.util.resize(topo.links.size());
    for (size_t l = 0; l < topo.links.size(); ++l)
        usage.util[l] = std::isinf(topo.links[l].capacity) ? 0.0
                                                           : usage.traffic[l] / topo.links[l].capacity;
    return usage;
}

ServerUsage server_load(const PlacementSolution& sol, const Instance& inst) {
    check_shape(sol, inst);
    const Topology& topo = inst.topo();
    ServerUsage usage;
    usage.load.assign(topo.servers.size(), 0.0);
    for (size_t s = 0; s < inst.sfcs.size(); ++s) {
        const auto& sfc = inst.sfcs[s];
        for (size_t v = 0; v < sfc.vnfs.size(); ++v) {
            for (ServerId x : sol.vnf_servers[s][v]) usage.load[x] += sfc.vnfs[v].overhead;
            for (size_t d = 0; d < sfc.demands.size(); ++d) {
                const ServerId x = sol.demand_server[s][v][d];
                if (x >= 0) usage.load[x] += sfc.vnfs[v].load_ratio * sfc.demands[d].value;
            }
        }
    }
    usage.util.resize(topo.servers.size());
    for (size_t x = 0; x < topo.servers.size(); ++x)
        usage.util[x] = std::isinf(topo.servers[x].capacity)
                            ? 0.0
                            : usage.load[x] / topo.servers[x].capacity;
    return usage;
}

double processing_delay_s(const PlacementSolution& sol, const Instance& inst, int s, int v,
                          ServerId x) {
    check_shape(sol, inst);
    const auto& listed = sol.vnf_servers[s][v];
    if (!std::binary_search(listed.begin(), listed.end(), x))
        throw std::invalid_argument("VNF not placed on server");
    return processing_delay_at(sol, inst, s, v, x, server_load(sol, inst).util[x]);
}

double downtime_s(const PlacementSolution& sol, const Instance& inst,
                  const PriorPlacement* prior, int s) {
    if (prior == nullptr || prior->empty()) return 0.0;
    int abandoned = 0;
    const size_t vcount = std::min(prior->servers[s].size(), sol.vnf_servers[s].size());
    for (size_t v = 0; v < vcount; ++v) {
        for (ServerId x : prior->servers[s][v]) {
            if (!std::binary_search(sol.vnf_servers[s][v].begin(), sol.vnf_servers[s][v].end(), x))
                ++abandoned;
        }
    }
    return inst.downtime_per_migration_s * abandoned;
}

DelayBreakdown demand_delay(const PlacementSolution& sol, const Instance& inst,
                            const PriorPlacement* prior, int s, int d) {
    check_shape(sol, inst);
    const auto& sfc = inst.sfcs[s];
    if (sfc.vnfs.empty()) throw std::invalid_argument("SFC has an empty VNF chain");
    const PathId p = sol.demand_path[s][d];
    if (p < 0) throw std::invalid_argument("demand is not routed");
    DelayBreakdown delay;
    delay.propagation_s = inst.paths().path(p).delay_s;
    const ServerUsage usage = server_load(sol, inst);
    for (size_t v = 0; v < sfc.vnfs.size(); ++v) {
        const ServerId x = sol.demand_server[s][v][d];
        if (x < 0) throw std::invalid_argument("demand traverses an unassigned VNF");
        delay.processing_s +=
            processing_delay_at(sol, inst, s, static_cast<int>(v), x, usage.util[x]);
    }
    delay.downtime_s = downtime_s(sol, inst, prior, s);
    return delay;
}

ObjectiveBreakdown objective(const PlacementSolution& sol, const Instance& inst,
                             const PriorPlacement* prior, const ObjectiveWeights& w) {
    check_shape(sol, inst);
    ObjectiveBreakdown out;
    for (size_t s = 0; s < inst.sfcs.size(); ++s) {
        for (size_t v = 0; v < inst.sfcs[s].vnfs.size(); ++v) {
            const auto& instances = sol.vnf_servers[s][v];
            if (prior != nullptr && !prior->empty() && s < prior->servers.size() &&
                v < prior->servers[s].size()) {
                for (ServerId x : prior->servers[s][v])
                    if (!std::binary_search(instances.begin(), instances.end(), x))
                        ++out.migrations;
            }
            if (!instances.empty()) out.replications += static_cast<int>(instances.size()) - 1;
            for (ServerId x : instances)
                if (inst.topo().servers[x].is_cloud) ++out.cloud_vnfs;
        }
    }
    out.value = w.migration * out.migrations + w.replication * out.replications +
                w.cloud * out.cloud_vnfs;
    return out;
}

PriorPlacement to_prior(const PlacementSolution& sol) {
    PriorPlacement prior;
    prior.servers = sol.vnf_servers;
    return prior;
}

std::vector<std::pair<NodeId, NodeId>> required_sync_pairs(const Topology& topo,
                                                           const std::vector<ServerId>& instances) {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    if (instances.size() < 2) return pairs;
    const NodeId origin = topo.servers[instances.front()].node;
    std::set<NodeId> replica_nodes;
    for (size_t i = 1; i < instances.size(); ++i) {
        const NodeId n = topo.servers[instances[i]].node;
        if (n != origin) replica_nodes.insert(n);
    }
    for (NodeId n : replica_nodes) pairs.emplace_back(origin, n);
    return pairs;
}

std::vector<Violation> check_feasibility(const PlacementSolution& sol, const Instance& inst,
                                         const PriorPlacement* prior) {
    check_shape(sol, inst);
    std::vector<Violation> out;
    const Topology& topo = inst.topo();
    const PathCatalog& cat = inst.paths();

    for (size_t si = 0; si < inst.sfcs.size(); ++si) {
        const int s = static_cast<int>(si);
        const auto& sfc = inst.sfcs[si];

        std::set<PathId> activated;
        for (size_t d = 0; d < sfc.demands.size(); ++d) {
            const PathId p = sol.demand_path[si][d];
            if (p < 0) {
                out.push_back({Violation::Kind::UnroutedDemand, s, -1, static_cast<int>(d)});
                continue;
            }
            activated.insert(p);
            if (std::find(sfc.admissible.begin(), sfc.admissible.end(), p) == sfc.admissible.end())
                out.push_back({Violation::Kind::PathNotAdmissible, s, -1, static_cast<int>(d), -1,
                               -1, p});
        }

        for (size_t v = 0; v < sfc.vnfs.size(); ++v) {
            const auto& instances = sol.vnf_servers[si][v];
            std::set<ServerId> with_demand;
            for (size_t d = 0; d < sfc.demands.size(); ++d) {
                const ServerId x = sol.demand_server[si][v][d];
                if (x < 0) {
                    out.push_back({Violation::Kind::UnassignedVnf, s, static_cast<int>(v),
                                   static_cast<int>(d)});
                    continue;
                }
                with_demand.insert(x);
                if (!std::binary_search(instances.begin(), instances.end(), x))
                    out.push_back({Violation::Kind::DemandServerNotListed, s, static_cast<int>(v),
                                   static_cast<int>(d), x});
                const PathId p = sol.demand_path[si][d];
                if (p >= 0 && cat.path(p).node_position(topo.servers[x].node) < 0)
                    out.push_back({Violation::Kind::ServerNotOnPath, s, static_cast<int>(v),
                                   static_cast<int>(d), x, -1, p});
            }
            for (ServerId x : instances)
                if (!with_demand.count(x))
                    out.push_back(
                        {Violation::Kind::InstanceWithoutDemand, s, static_cast<int>(v), -1, x});

            if (!sfc.vnfs[v].replicable && instances.size() > 1)
                out.push_back({Violation::Kind::ReplicabilityViolation, s, static_cast<int>(v)});
            if (sfc.vnfs[v].replicable && instances.size() > activated.size()) {
                Violation viol{Violation::Kind::ReplicaCountExceedsPaths, s, static_cast<int>(v)};
                viol.value = static_cast<double>(instances.size());
                viol.limit = static_cast<double>(activated.size());
                out.push_back(viol);
            }

            // sync paths: one designated path per (original node -> replica node)
            const auto required = required_sync_pairs(topo, instances);
            std::set<PathId> expected;
            for (const auto& [n, m] : required) {
                const PathId q = cat.sync_path[n][m];
                expected.insert(q);
                if (!std::binary_search(sol.sync_paths[si][v].begin(), sol.sync_paths[si][v].end(),
                                        q)) {
                    Violation viol{Violation::Kind::SyncPathMissing, s, static_cast<int>(v)};
                    viol.path = q;
                    out.push_back(viol);
                }
            }
            for (PathId p : sol.sync_paths[si][v]) {
                if (!expected.count(p)) {
                    Violation viol{Violation::Kind::SyncPathUnexpected, s, static_cast<int>(v)};
                    viol.path = p;
                    out.push_back(viol);
                }
            }
        }

        // per-demand order along the assigned path
        for (size_t d = 0; d < sfc.demands.size(); ++d) {
            const PathId p = sol.demand_path[si][d];
            if (p < 0) continue;
            const Path& path = cat.path(p);
            int prev_pos = 0;
            for (size_t v = 0; v < sfc.vnfs.size(); ++v) {
                const ServerId x = sol.demand_server[si][v][d];
                if (x < 0) break;
                const int pos = path.node_position(topo.servers[x].node);
                if (pos < 0) break; // reported above
                if (pos < prev_pos) {
                    out.push_back({Violation::Kind::OrderViolation, s, static_cast<int>(v),
                                   static_cast<int>(d), x, -1, p});
                }
                prev_pos = std::max(prev_pos, pos);
            }
        }
    }

    const LinkUsage links = link_utilization(sol, inst);
    for (size_t l = 0; l < topo.links.size(); ++l) {
        if (topo.links[l].cloud_adjacent) continue;
        if (links.util[l] > 1.0 + kFeasEps) {
            Violation viol{Violation::Kind::LinkOverCapacity};
            viol.link = static_cast<int>(l);
            viol.value = links.util[l];
            viol.limit = 1.0;
            out.push_back(viol);
        }
    }
    const ServerUsage servers = server_load(sol, inst);
    for (size_t x = 0; x < topo.servers.size(); ++x) {
        if (topo.servers[x].is_cloud) continue;
        if (servers.util[x] > 1.0 + kFeasEps) {
            Violation viol{Violation::Kind::ServerOverCapacity};
            viol.server = static_cast<int>(x);
            viol.value = servers.util[x];
            viol.limit = 1.0;
            out.push_back(viol);
        }
    }

    for (size_t si = 0; si < inst.sfcs.size(); ++si) {
        const int s = static_cast<int>(si);
        const auto& sfc = inst.sfcs[si];
        for (size_t v = 0; v < sfc.vnfs.size(); ++v) {
            for (ServerId x : sol.vnf_servers[si][v]) {
                const double dpro =
                    processing_delay_at(sol, inst, s, static_cast<int>(v), x, servers.util[x]);
                if (dpro > sfc.vnfs[v].d_pro_max_s * (1.0 + kFeasEps)) {
                    Violation viol{Violation::Kind::ProcessingDelayExceeded, s,
                                   static_cast<int>(v)};
                    viol.server = x;
                    viol.value = dpro;
                    viol.limit = sfc.vnfs[v].d_pro_max_s;
                    out.push_back(viol);
                }
            }
        }
        for (size_t d = 0; d < sfc.demands.size(); ++d) {
            const PathId p = sol.demand_path[si][d];
            if (p < 0) continue;
            bool complete = true;
            DelayBreakdown delay;
            delay.propagation_s = cat.path(p).delay_s;
            for (size_t v = 0; v < sfc.vnfs.size(); ++v) {
                const ServerId x = sol.demand_server[si][v][d];
                if (x < 0) {
                    complete = false;
                    break;
                }
                delay.processing_s +=
                    processing_delay_at(sol, inst, s, static_cast<int>(v), x, servers.util[x]);
            }
            if (!complete) continue;
            delay.downtime_s = downtime_s(sol, inst, prior, s);
            if (delay.total_s() > sfc.max_delay_s * (1.0 + kFeasEps)) {
                Violation viol{Violation::Kind::DelayExceeded, s, -1, static_cast<int>(d)};
                viol.path = p;
                viol.value = delay.total_s();
                viol.limit = sfc.max_delay_s;
                out.push_back(viol);
            }
        }
    }
    return out;
}

MetricsReport build_metrics(const PlacementSolution& sol, const Instance& inst,
                            const PriorPlacement* prior, const ObjectiveWeights& w) {
    MetricsReport m;
    m.objective = objective(sol, inst, prior, w);
    m.links = link_utilization(sol, inst);
    m.servers = server_load(sol, inst);
    m.violations = check_feasibility(sol, inst, prior);

    const Topology& topo = inst.topo();
    double lsum = 0.0;
    int lcount = 0;
    for (size_t l = 0; l < topo.links.size(); ++l) {
        if (topo.links[l].cloud_adjacent) continue;
        lsum += m.links.util[l];
        ++lcount;
    }
    m.mean_link_util = lcount > 0 ? lsum / lcount : 0.0;
    double xsum = 0.0;
    int xcount = 0;
    for (size_t x = 0; x < topo.servers.size(); ++x) {
        if (topo.servers[x].is_cloud) continue;
        xsum += m.servers.util[x];
        ++xcount;
    }
    m.mean_server_util = xcount > 0 ? xsum / xcount : 0.0;

    m.demand_delay.resize(inst.sfcs.size());
    double dsum = 0.0;
    int dcount = 0;
    for (size_t s = 0; s < inst.sfcs.size(); ++s) {
        m.demand_delay[s].resize(inst.sfcs[s].demands.size());
        for (size_t d = 0; d < inst.sfcs[s].demands.size(); ++d) {
            bool complete = sol.demand_path[s][d] >= 0;
            for (size_t v = 0; complete && v < inst.sfcs[s].vnfs.size(); ++v)
                complete = sol.demand_server[s][v][d] >= 0;
            if (!complete) continue;
            m.demand_delay[s][d] =
                demand_delay(sol, inst, prior, static_cast<int>(s), static_cast<int>(d));
            dsum += m.demand_delay[s][d]->total_s();
            ++dcount;
        }
    }
    m.mean_delay_s = dcount > 0 ? dsum / dcount : 0.0;
    return m;
}

std::string solution_to_json(const PlacementSolution& sol) {
    nlohmann::json j;
    j["demand_path"] = sol.demand_path;
    j["demand_vnf_server"] = sol.demand_server;
    j["vnf_servers"] = sol.vnf_servers;
    j["sync_paths"] = sol.sync_paths;
    return j.dump();
}

PlacementSolution solution_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PlacementSolution sol;
    sol.demand_path = j.at("demand_path").get<std::vector<std::vector<PathId>>>();
    sol.demand_server =
        j.at("demand_vnf_server").get<std::vector<std::vector<std::vector<ServerId>>>>();
    sol.vnf_servers = j.at("vnf_servers").get<std::vector<std::vector<std::vector<ServerId>>>>();
    sol.sync_paths = j.at("sync_paths").get<std::vector<std::vector<std::vector<PathId>>>>();
    return sol;
}

std::string metrics_to_json(const MetricsReport& m) {
    nlohmann::json j;
    j["objective"] = {{"value", m.objective.value},
                      {"migrations", m.objective.migrations},
                      {"replications", m.objective.replications},
                      {"cloud_vnfs", m.objective.cloud_vnfs}};
    j["link_util"] = m.links.util;
    j["server_util"] = m.servers.util;
    j["server_load"] = m.servers.load;
    j["mean_link_util"] = m.mean_link_util;
    j["mean_server_util"] = m.mean_server_util;
    j["mean_delay_s"] = m.mean_delay_s;
    nlohmann::json delays = nlohmann::json::array();
    for (const auto& per_sfc : m.demand_delay) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& d : per_sfc) {
            if (d.has_value())
                row.push_back({{"propagation_s", d->propagation_s},
                               {"processing_s", d->processing_s},
                               {"downtime_s", d->downtime_s},
                               {"total_s", d->total_s()}});
            else
                row.push_back(nullptr);
        }
        delays.push_back(row);
    }
    j["demand_delay"] = delays;
    nlohmann::json viols = nlohmann::json::array();
    for (const auto& viol : m.violations) viols.push_back(viol.describe());
    j["violations"] = viols;
    return j.dump();
}

std::string metrics_to_csv_row(const MetricsReport& m) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%.17g,%.17g", m.objective.migrations,
                  m.objective.replications, m.objective.cloud_vnfs, m.objective.value,
                  m.mean_link_util, m.mean_server_util, m.mean_delay_s * 1000.0);
    return std::string(buf);
}

} // namespace vnfopt
