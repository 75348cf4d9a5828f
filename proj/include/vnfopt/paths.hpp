#ifndef VNFOPT_PATHS_HPP
#define VNFOPT_PATHS_HPP

#include <vector>

#include "vnfopt/topology.hpp"

namespace vnfopt {

using PathId = int;

struct Path {
    PathId id = -1;
    NodeId src = -1;
    NodeId dst = -1;
    std::vector<NodeId> nodes;     // ordered, src first
    std::vector<LinkId> links;     // nodes.size()-1 entries
    std::vector<ServerId> servers; // servers of every node on the path, in path order
    double delay_s = 0.0;          // sum of link delays
    bool via_cloud = false;
    bool sync = false; // designated synchronization path

    bool uses_link(LinkId l) const;
    // position of a server's node within this path, -1 if not on it
    int node_position(NodeId n) const;
};

// Admissible paths per SFC endpoint pair (3 cloud-avoiding + 1 via cloud) and
// one designated shortest sync path per ordered node pair.
struct PathCatalog {
    std::vector<Path> paths;
    std::vector<std::vector<std::vector<PathId>>> admissible; // [src][dst]
    std::vector<std::vector<PathId>> sync_path;               // [src][dst], -1 if none

    const Path& path(PathId p) const { return paths[static_cast<size_t>(p)]; }
    const std::vector<PathId>& admissible_for(NodeId src, NodeId dst) const {
        return admissible[static_cast<size_t>(src)][static_cast<size_t>(dst)];
    }
};

// k shortest loopless paths by propagation delay (Yen), excluding the nodes
// in `banned`. Deterministic: ties broken by lexicographic node sequence.
std::vector<std::vector<NodeId>> k_shortest_paths(const Topology& topo, NodeId src, NodeId dst,
                                                  int k, const std::vector<NodeId>& banned = {});

// Builds the full catalog: for every ordered non-cloud pair the 3 shortest
// cloud-avoiding paths plus the shortest cloud-traversing one, and for every
// ordered node pair (cloud included) the designated sync path. Throws if a
// pair has fewer than 3 cloud-avoiding paths, naming the pair.
PathCatalog precompute_paths(const Topology& topo, int cloud_avoiding = 3);

} // namespace vnfopt

#endif
