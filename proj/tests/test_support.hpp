#ifndef VNFOPT_TEST_SUPPORT_HPP
#define VNFOPT_TEST_SUPPORT_HPP

#include <memory>
#include <string>

#include "vnfopt/experiment.hpp"
#include "vnfopt/model.hpp"

namespace vnfopt::test {

inline std::string data_path(const std::string& name) {
    return std::string(VNFOPT_DATA_DIR) + "/" + name;
}

// triangle of three nodes plus the cloud; every pair directly linked
inline TopologySpec triangle_spec(double link_capacity = 500.0, double server_capacity = 1000.0,
                                  int servers_per_node = 1) {
    TopologySpec spec;
    spec.nodes = {{0, {50.00, 8.00}, servers_per_node, server_capacity},
                  {1, {50.40, 8.40}, servers_per_node, server_capacity},
                  {2, {50.00, 8.80}, servers_per_node, server_capacity}};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            if (a != b) spec.links.push_back({a, b, link_capacity});
    spec.cloud = {{51.20, 8.40}, 1};
    return spec;
}

// complete graph on four nodes plus the cloud; every ordered pair has a
// direct path, two 2-hop paths and more
inline TopologySpec quad_spec(double link_capacity = 500.0, double server_capacity = 1000.0,
                              int servers_per_node = 1, int cloud_servers = 1) {
    TopologySpec spec;
    spec.nodes = {{0, {50.00, 8.00}, servers_per_node, server_capacity},
                  {1, {50.40, 8.30}, servers_per_node, server_capacity},
                  {2, {50.05, 8.85}, servers_per_node, server_capacity},
                  {3, {49.70, 8.40}, servers_per_node, server_capacity}};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (a != b) spec.links.push_back({a, b, link_capacity});
    spec.cloud = {{51.20, 8.40}, cloud_servers};
    return spec;
}

struct World {
    std::shared_ptr<const Topology> topo;
    std::shared_ptr<const PathCatalog> catalog;
};

inline World make_world(const TopologySpec& spec) {
    World w;
    w.topo = std::make_shared<const Topology>(build_topology(spec));
    w.catalog = std::make_shared<const PathCatalog>(precompute_paths(*w.topo));
    return w;
}

// one SFC between src and dst with uniform VNF parameters
inline Instance toy_instance(const World& w, NodeId src, NodeId dst, int vnfs,
                             std::vector<double> demand_values, double load_ratio = 0.5,
                             double overhead = 7.0, double sync_ratio = 0.1) {
    Instance inst;
    inst.topology = w.topo;
    inst.catalog = w.catalog;
    ServiceChain sfc;
    sfc.id = 0;
    sfc.src = src;
    sfc.dst = dst;
    sfc.admissible = w.catalog->admissible_for(src, dst);
    for (int v = 0; v < vnfs; ++v) {
        VnfSpec vnf;
        vnf.type = v;
        vnf.load_ratio = load_ratio;
        vnf.sync_ratio = sync_ratio;
        vnf.overhead = overhead;
        sfc.vnfs.push_back(vnf);
    }
    for (size_t d = 0; d < demand_values.size(); ++d)
        sfc.demands.push_back({static_cast<int>(d), demand_values[d]});
    inst.sfcs.push_back(std::move(sfc));
    return inst;
}

} // namespace vnfopt::test

#endif
