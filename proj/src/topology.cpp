#include "vnfopt/topology.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace vnfopt {

LinkId Topology::find_link(NodeId src, NodeId dst) const {
    for (LinkId l : out_links[src])
        if (links[l].dst == dst) return l;
    return -1;
}

TopologySpec parse_topology_spec(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    TopologySpec spec;
    for (const auto& jn : j.at("nodes")) {
        TopologySpec::NodeSpec n;
        n.id = jn.at("id").get<int>();
        n.coord.lat_deg = jn.at("lat").get<double>();
        n.coord.lon_deg = jn.at("lon").get<double>();
        n.servers = jn.value("servers", 1);
        n.server_capacity = jn.value("server_capacity", 1000.0);
        spec.nodes.push_back(n);
    }
    for (const auto& jl : j.at("links")) {
        TopologySpec::LinkSpec l;
        l.src = jl.at("src").get<int>();
        l.dst = jl.at("dst").get<int>();
        l.capacity = jl.at("capacity").get<double>();
        spec.links.push_back(l);
    }
    const auto& jc = j.at("cloud");
    spec.cloud.coord.lat_deg = jc.at("lat").get<double>();
    spec.cloud.coord.lon_deg = jc.at("lon").get<double>();
    spec.cloud.servers = jc.value("servers", 1);
    return spec;
}

TopologySpec load_topology_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open topology spec: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_topology_spec(ss.str());
}

Topology build_topology(const TopologySpec& spec) {
    if (spec.nodes.empty()) throw std::invalid_argument("topology spec has no nodes");
    if (spec.cloud.servers < 1) throw std::invalid_argument("cloud needs at least one server");

    // Dense internal ids: non-cloud nodes sorted by external id, cloud last.
    std::vector<TopologySpec::NodeSpec> ordered = spec.nodes;
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    std::unordered_map<int, NodeId> index_of;
    for (size_t i = 0; i < ordered.size(); ++i) {
        if (!index_of.emplace(ordered[i].id, static_cast<NodeId>(i)).second)
            throw std::invalid_argument("duplicate node id " + std::to_string(ordered[i].id));
    }

    Topology topo;
    for (const auto& n : ordered) {
        if (n.servers < 1)
            throw std::invalid_argument("node " + std::to_string(n.id) + " has no servers");
        if (n.server_capacity <= 0.0)
            throw std::invalid_argument("node " + std::to_string(n.id) +
                                        " has non-positive server capacity");
        topo.nodes.push_back(Node{n.id, n.coord});
    }
    const NodeId cloud = static_cast<NodeId>(topo.nodes.size());
    int max_ext = 0;
    for (const auto& n : ordered) max_ext = std::max(max_ext, n.id);
    topo.nodes.push_back(Node{max_ext + 1, spec.cloud.coord});
    topo.cloud_node = cloud;
    topo.out_links.resize(topo.nodes.size());

    std::set<std::pair<int, int>> seen_links;
    for (const auto& l : spec.links) {
        auto is = index_of.find(l.src);
        auto id = index_of.find(l.dst);
        if (is == index_of.end() || id == index_of.end())
            throw std::invalid_argument("link references unknown node " +
                                        std::to_string(is == index_of.end() ? l.src : l.dst));
        if (l.src == l.dst) throw std::invalid_argument("self-link on node " + std::to_string(l.src));
        if (l.capacity <= 0.0) throw std::invalid_argument("non-positive link capacity");
        if (!seen_links.emplace(l.src, l.dst).second)
            throw std::invalid_argument("duplicate link " + std::to_string(l.src) + "->" +
                                        std::to_string(l.dst));
        Link link;
        link.id = static_cast<LinkId>(topo.links.size());
        link.src = is->second;
        link.dst = id->second;
        link.capacity = l.capacity;
        link.delay_s = propagation_delay_s(topo.nodes[link.src].coord, topo.nodes[link.dst].coord);
        topo.out_links[link.src].push_back(link.id);
        topo.links.push_back(link);
    }

    // direct links to and from the cloud for every node
    for (NodeId n = 0; n < cloud; ++n) {
        const double d = propagation_delay_s(topo.nodes[n].coord, topo.nodes[cloud].coord);
        for (int dir = 0; dir < 2; ++dir) {
            Link link;
            link.id = static_cast<LinkId>(topo.links.size());
            link.src = dir == 0 ? n : cloud;
            link.dst = dir == 0 ? cloud : n;
            link.capacity = kUnbounded;
            link.delay_s = d;
            link.cloud_adjacent = true;
            topo.out_links[link.src].push_back(link.id);
            topo.links.push_back(link);
        }
    }

    topo.servers_at.resize(topo.nodes.size());
    for (size_t i = 0; i < ordered.size(); ++i) {
        for (int k = 0; k < ordered[i].servers; ++k) {
            Server s;
            s.id = static_cast<ServerId>(topo.servers.size());
            s.node = static_cast<NodeId>(i);
            s.capacity = ordered[i].server_capacity;
            topo.servers_at[i].push_back(s.id);
            topo.servers.push_back(s);
        }
    }
    for (int k = 0; k < spec.cloud.servers; ++k) {
        Server s;
        s.id = static_cast<ServerId>(topo.servers.size());
        s.node = cloud;
        s.capacity = kUnbounded;
        s.is_cloud = true;
        topo.servers_at[cloud].push_back(s.id);
        topo.servers.push_back(s);
    }

    // the non-cloud subgraph must be strongly connected
    if (cloud > 1) {
        auto reachable = [&](bool reversed) {
            std::vector<char> seen(cloud, 0);
            std::queue<NodeId> q;
            q.push(0);
            seen[0] = 1;
            int count = 1;
            while (!q.empty()) {
                NodeId n = q.front();
                q.pop();
                for (const Link& l : topo.links) {
                    if (l.cloud_adjacent) continue;
                    NodeId from = reversed ? l.dst : l.src;
                    NodeId to = reversed ? l.src : l.dst;
                    if (from == n && !seen[to]) {
                        seen[to] = 1;
                        ++count;
                        q.push(to);
                    }
                }
            }
            return count;
        };
        if (reachable(false) != cloud || reachable(true) != cloud)
            throw std::invalid_argument("non-cloud subgraph is not strongly connected");
    }
    return topo;
}

Topology with_server_capacity(const Topology& topo, double capacity) {
    if (capacity <= 0.0) throw std::invalid_argument("server capacity must be positive");
    Topology out = topo;
    for (Server& s : out.servers)
        if (!s.is_cloud) s.capacity = capacity;
    return out;
}

} // namespace vnfopt
