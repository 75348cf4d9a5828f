#ifndef VNFOPT_TOPOLOGY_HPP
#define VNFOPT_TOPOLOGY_HPP

#include <limits>
#include <string>
#include <vector>

#include "vnfopt/geo.hpp"

namespace vnfopt {

using NodeId = int;
using LinkId = int;
using ServerId = int;

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct Node {
    int external_id = 0;
    GeoCoord coord;
};

struct Link {
    LinkId id = -1;
    NodeId src = -1;
    NodeId dst = -1;
    double capacity = 0.0; // traffic units; kUnbounded on cloud links
    double delay_s = 0.0;
    bool cloud_adjacent = false;
};

struct Server {
    ServerId id = -1;
    NodeId node = -1;
    double capacity = 0.0; // processing units; kUnbounded on cloud servers
    bool is_cloud = false;
};

// Immutable after build_topology; all ids are dense indices.
struct Topology {
    std::vector<Node> nodes; // cloud node last
    std::vector<Link> links;
    std::vector<Server> servers;
    std::vector<std::vector<ServerId>> servers_at; // per node, ascending
    std::vector<std::vector<LinkId>> out_links;    // per node
    NodeId cloud_node = -1;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int non_cloud_node_count() const { return node_count() - 1; }
    bool is_cloud_node(NodeId n) const { return n == cloud_node; }
    LinkId find_link(NodeId src, NodeId dst) const; // -1 if absent
};

// Mirrors the topology spec file:
// {nodes:[{id,lat,lon,servers,server_capacity}], links:[{src,dst,capacity}],
//  cloud:{lat,lon,servers}}
// Each links[] entry is one directed link; link delays are always derived
// from coordinates, never read from the file.
struct TopologySpec {
    struct NodeSpec {
        int id = 0;
        GeoCoord coord;
        int servers = 1;
        double server_capacity = 0.0;
    };
    struct LinkSpec {
        int src = 0;
        int dst = 0;
        double capacity = 0.0;
    };
    struct CloudSpec {
        GeoCoord coord;
        int servers = 1;
    };
    std::vector<NodeSpec> nodes;
    std::vector<LinkSpec> links;
    CloudSpec cloud;
};

TopologySpec load_topology_spec(const std::string& path);
TopologySpec parse_topology_spec(const std::string& json_text);

// Validates the spec, derives link delays, and attaches the cloud node with
// direct links to and from every other node. Throws std::invalid_argument on
// duplicate ids, dangling link endpoints, non-positive capacities or a
// disconnected non-cloud subgraph.
Topology build_topology(const TopologySpec& spec);

// Copy with every non-cloud server capacity replaced (capacity sweeps).
Topology with_server_capacity(const Topology& topo, double capacity);

} // namespace vnfopt

#endif
