#include "vnfopt/paths.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

namespace vnfopt {

bool Path::uses_link(LinkId l) const {
    return std::find(links.begin(), links.end(), l) != links.end();
}

int Path::node_position(NodeId n) const {
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == n) return static_cast<int>(i);
    return -1;
}

namespace {

// Dijkstra over non-disabled nodes/links; returns node sequence, empty if
// unreachable. Parent updates on strict improvement only, so the result is
// deterministic given adjacency order.
std::vector<NodeId> dijkstra(const Topology& topo, NodeId src, NodeId dst,
                             const std::vector<char>& node_off, const std::vector<char>& link_off) {
    const int n = topo.node_count();
    std::vector<double> dist(n, kUnbounded);
    std::vector<LinkId> parent_link(n, -1);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[src] = 0.0;
    heap.emplace(0.0, src);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        if (u == dst) break;
        for (LinkId lid : topo.out_links[u]) {
            if (link_off[lid]) continue;
            const Link& l = topo.links[lid];
            if (node_off[l.dst]) continue;
            const double nd = d + l.delay_s;
            if (nd < dist[l.dst]) {
                dist[l.dst] = nd;
                parent_link[l.dst] = lid;
                heap.emplace(nd, l.dst);
            }
        }
    }
    if (dist[dst] == kUnbounded) return {};
    std::vector<NodeId> seq;
    for (NodeId cur = dst; cur != src;) {
        seq.push_back(cur);
        cur = topo.links[parent_link[cur]].src;
    }
    seq.push_back(src);
    std::reverse(seq.begin(), seq.end());
    return seq;
}

double sequence_delay(const Topology& topo, const std::vector<NodeId>& nodes) {
    double d = 0.0;
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        LinkId l = topo.find_link(nodes[i], nodes[i + 1]);
        d += topo.links[l].delay_s;
    }
    return d;
}

} // namespace

std::vector<std::vector<NodeId>> k_shortest_paths(const Topology& topo, NodeId src, NodeId dst,
                                                  int k, const std::vector<NodeId>& banned) {
    std::vector<char> node_off(topo.node_count(), 0);
    std::vector<char> link_off(topo.links.size(), 0);
    for (NodeId b : banned) node_off[b] = 1;

    std::vector<std::vector<NodeId>> found;
    auto first = dijkstra(topo, src, dst, node_off, link_off);
    if (first.empty()) return found;
    found.push_back(first);

    // candidate set ordered by (delay, node sequence)
    using Cand = std::pair<double, std::vector<NodeId>>;
    std::set<Cand> candidates;

    while (static_cast<int>(found.size()) < k) {
        const auto& prev = found.back();
        for (size_t i = 0; i + 1 < prev.size(); ++i) {
            const NodeId spur = prev[i];
            std::vector<NodeId> root(prev.begin(), prev.begin() + static_cast<long>(i) + 1);

            std::vector<char> noff = node_off;
            std::vector<char> loff = link_off;
            for (const auto& p : found) {
                if (p.size() > i && std::equal(root.begin(), root.end(), p.begin()))
                    loff[topo.find_link(p[i], p[i + 1])] = 1;
            }
            for (size_t j = 0; j < i; ++j) noff[root[j]] = 1;

            auto spur_path = dijkstra(topo, spur, dst, noff, loff);
            if (spur_path.empty()) continue;
            root.pop_back();
            root.insert(root.end(), spur_path.begin(), spur_path.end());
            bool known = std::any_of(found.begin(), found.end(),
                                     [&](const auto& p) { return p == root; });
            if (!known) candidates.emplace(sequence_delay(topo, root), root);
        }
        if (candidates.empty()) break;
        auto best = candidates.begin();
        found.push_back(best->second);
        candidates.erase(best);
    }
    return found;
}

namespace {

Path make_path(const Topology& topo, std::vector<NodeId> nodes, PathId id) {
    Path p;
    p.id = id;
    p.src = nodes.front();
    p.dst = nodes.back();
    p.nodes = std::move(nodes);
    for (size_t i = 0; i + 1 < p.nodes.size(); ++i) {
        LinkId l = topo.find_link(p.nodes[i], p.nodes[i + 1]);
        if (l < 0) throw std::logic_error("path uses a missing link");
        p.links.push_back(l);
        p.delay_s += topo.links[l].delay_s;
    }
    for (NodeId n : p.nodes) {
        p.via_cloud = p.via_cloud || topo.is_cloud_node(n);
        for (ServerId s : topo.servers_at[n]) p.servers.push_back(s);
    }
    return p;
}

} // namespace

PathCatalog precompute_paths(const Topology& topo, int cloud_avoiding) {
    PathCatalog cat;
    const int n = topo.node_count();
    const NodeId cloud = topo.cloud_node;
    cat.admissible.assign(n, std::vector<std::vector<PathId>>(n));
    cat.sync_path.assign(n, std::vector<PathId>(n, -1));

    for (NodeId s = 0; s < n; ++s) {
        if (topo.is_cloud_node(s)) continue;
        for (NodeId d = 0; d < n; ++d) {
            if (d == s || topo.is_cloud_node(d)) continue;
            auto avoid = k_shortest_paths(topo, s, d, cloud_avoiding, {cloud});
            if (static_cast<int>(avoid.size()) < cloud_avoiding)
                throw std::invalid_argument(
                    "fewer than " + std::to_string(cloud_avoiding) +
                    " cloud-avoiding paths between nodes " + std::to_string(topo.nodes[s].external_id) +
                    " and " + std::to_string(topo.nodes[d].external_id));
            for (auto& seq : avoid) {
                Path p = make_path(topo, std::move(seq), static_cast<PathId>(cat.paths.size()));
                cat.admissible[s][d].push_back(p.id);
                cat.paths.push_back(std::move(p));
            }
            // the shortest cloud-traversing path is via the direct cloud links
            Path via = make_path(topo, {s, cloud, d}, static_cast<PathId>(cat.paths.size()));
            cat.admissible[s][d].push_back(via.id);
            cat.paths.push_back(std::move(via));
        }
    }

    // designated sync path per ordered node pair (cloud included)
    std::vector<char> node_off(n, 0), link_off(topo.links.size(), 0);
    for (NodeId s = 0; s < n; ++s) {
        for (NodeId d = 0; d < n; ++d) {
            if (s == d) continue;
            auto seq = dijkstra(topo, s, d, node_off, link_off);
            if (seq.empty()) continue;
            Path p = make_path(topo, std::move(seq), static_cast<PathId>(cat.paths.size()));
            p.sync = true;
            cat.sync_path[s][d] = p.id;
            cat.paths.push_back(std::move(p));
        }
    }
    return cat;
}

} // namespace vnfopt
