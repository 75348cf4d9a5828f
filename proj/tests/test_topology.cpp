#include <doctest.h>

#include <cmath>
#include <set>

#include "test_support.hpp"
#include "vnfopt/geo.hpp"

using namespace vnfopt;

TEST_CASE("propagation delay basics") {
    GeoCoord a{52.2689, 10.5268};
    CHECK(propagation_delay_s(a, a) == 0.0);

    // independent Haversine formula (different trig identity)
    GeoCoord b{50.1109, 8.6821};
    const double rad = 0.017453292519943295;
    const double phi1 = a.lat_deg * rad, phi2 = b.lat_deg * rad;
    const double dphi = phi2 - phi1, dl = (b.lon_deg - a.lon_deg) * rad;
    const double h =
        std::sin(dphi / 2) * std::sin(dphi / 2) +
        std::cos(phi1) * std::cos(phi2) * std::sin(dl / 2) * std::sin(dl / 2);
    const double d_oracle =
        6371000.0 * 2.0 * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
    CHECK(haversine_m(a, b) == doctest::Approx(d_oracle).epsilon(1e-12));
    CHECK(propagation_delay_s(a, b) ==
          doctest::Approx(d_oracle / (2.0 * 299792458.0 / 3.0)).epsilon(1e-12));

    // antipodal points: half circumference over 2/3 c
    GeoCoord p{0.0, 0.0}, q{0.0, 180.0};
    const double expected = 3.14159265358979323846 * 6371000.0 / (2.0 * 299792458.0 / 3.0);
    CHECK(propagation_delay_s(p, q) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(expected == doctest::Approx(0.1001).epsilon(1e-3));
}

TEST_CASE("build_topology attaches the cloud everywhere") {
    auto spec = test::quad_spec();
    Topology topo = build_topology(spec);
    CHECK(topo.node_count() == 5);
    CHECK(topo.links.size() == 12 + 2 * 4);
    CHECK(topo.servers.size() == 5);
    CHECK(topo.servers.back().is_cloud);
    CHECK(std::isinf(topo.servers.back().capacity));
    for (NodeId n = 0; n < 4; ++n) {
        CHECK(topo.find_link(n, topo.cloud_node) >= 0);
        CHECK(topo.find_link(topo.cloud_node, n) >= 0);
    }
    for (const Link& l : topo.links) {
        CHECK(l.delay_s >= 0.0);
        if (l.cloud_adjacent) CHECK(std::isinf(l.capacity));
    }
}

TEST_CASE("single node topology has only the two cloud links") {
    TopologySpec spec;
    spec.nodes = {{7, {50.0, 8.0}, 1, 100.0}};
    spec.cloud = {{51.0, 8.0}, 1};
    Topology topo = build_topology(spec);
    CHECK(topo.links.size() == 2);
    CHECK(topo.node_count() == 2);
}

TEST_CASE("topology validation errors") {
    auto spec = test::triangle_spec();
    spec.links.push_back({0, 9, 100.0});
    CHECK_THROWS_AS(build_topology(spec), std::invalid_argument);

    auto dup = test::triangle_spec();
    dup.nodes.push_back({0, {49.0, 8.0}, 1, 10.0});
    CHECK_THROWS_AS(build_topology(dup), std::invalid_argument);

    TopologySpec disconnected;
    disconnected.nodes = {{0, {50.0, 8.0}, 1, 10.0}, {1, {50.5, 8.0}, 1, 10.0},
                          {2, {51.0, 8.0}, 1, 10.0}};
    disconnected.links = {{0, 1, 5.0}, {1, 0, 5.0}};
    disconnected.cloud = {{51.0, 9.0}, 1};
    CHECK_THROWS_AS(build_topology(disconnected), std::invalid_argument);
}

TEST_CASE("N7 spec matches the reference description") {
    Topology topo = build_topology(load_topology_spec(test::data_path("n7.json")));
    CHECK(topo.non_cloud_node_count() == 7);
    CHECK(topo.links.size() == 20 + 14);
    CHECK(topo.servers.size() == 8);
}

TEST_CASE("path catalog: 3 cloud-avoiding + 1 via cloud per pair") {
    auto w = test::make_world(test::quad_spec());
    const NodeId cloud = w.topo->cloud_node;
    for (NodeId s = 0; s < 4; ++s) {
        for (NodeId d = 0; d < 4; ++d) {
            if (s == d) continue;
            const auto& paths = w.catalog->admissible_for(s, d);
            REQUIRE(paths.size() == 4);
            int via_cloud = 0;
            double prev_delay = 0.0;
            for (size_t i = 0; i < paths.size(); ++i) {
                const Path& p = w.catalog->path(paths[i]);
                CHECK(p.src == s);
                CHECK(p.dst == d);
                // recompute delay from links
                double delay = 0.0;
                for (LinkId l : p.links) delay += w.topo->links[l].delay_s;
                CHECK(delay == doctest::Approx(p.delay_s).epsilon(1e-15));
                // simple path
                std::set<NodeId> uniq(p.nodes.begin(), p.nodes.end());
                CHECK(uniq.size() == p.nodes.size());
                if (p.via_cloud) {
                    ++via_cloud;
                    CHECK(p.nodes.size() == 3);
                    CHECK(p.nodes[1] == cloud);
                } else {
                    CHECK(uniq.count(cloud) == 0);
                    if (i > 0 && !w.catalog->path(paths[i - 1]).via_cloud)
                        CHECK(p.delay_s >= prev_delay);
                }
                prev_delay = p.delay_s;
            }
            CHECK(via_cloud == 1);
            // complete graph: direct + two 2-hop cloud-avoiding paths
            CHECK(w.catalog->path(paths[0]).nodes.size() == 2);
            CHECK(w.catalog->path(paths[1]).nodes.size() == 3);
            CHECK(w.catalog->path(paths[2]).nodes.size() == 3);
        }
    }
    // sync paths exist for every ordered pair including the cloud
    for (NodeId n = 0; n < w.topo->node_count(); ++n)
        for (NodeId m = 0; m < w.topo->node_count(); ++m) {
            if (n == m) continue;
            const PathId q = w.catalog->sync_path[n][m];
            REQUIRE(q >= 0);
            CHECK(w.catalog->path(q).src == n);
            CHECK(w.catalog->path(q).dst == m);
            CHECK(w.catalog->path(q).sync);
        }
}

TEST_CASE("too few cloud-avoiding paths is an error naming the pair") {
    TopologySpec line;
    line.nodes = {{0, {50.0, 8.0}, 1, 10.0}, {1, {50.5, 8.0}, 1, 10.0}};
    line.links = {{0, 1, 5.0}, {1, 0, 5.0}};
    line.cloud = {{51.0, 9.0}, 1};
    CHECK_THROWS_WITH_AS(precompute_paths(build_topology(line)),
                         doctest::Contains("cloud-avoiding"), std::invalid_argument);

    // a triangle has only two loopless cloud-avoiding routes per pair
    Topology tri = build_topology(test::triangle_spec());
    CHECK(k_shortest_paths(tri, 0, 1, 3, {tri.cloud_node}).size() == 2);
    CHECK_THROWS_WITH_AS(precompute_paths(tri), doctest::Contains("between nodes 0 and 1"),
                         std::invalid_argument);
}

TEST_CASE("k shortest paths are sorted, simple and loopless") {
    Topology topo = build_topology(load_topology_spec(test::data_path("n7.json")));
    auto paths = k_shortest_paths(topo, 0, 6, 5, {topo.cloud_node});
    REQUIRE(paths.size() == 5);
    double prev = 0.0;
    for (const auto& nodes : paths) {
        std::set<NodeId> uniq(nodes.begin(), nodes.end());
        CHECK(uniq.size() == nodes.size());
        double delay = 0.0;
        for (size_t i = 0; i + 1 < nodes.size(); ++i)
            delay += topo.links[topo.find_link(nodes[i], nodes[i + 1])].delay_s;
        CHECK(delay >= prev);
        prev = delay;
    }
    // all five routes distinct
    std::set<std::vector<NodeId>> uniq(paths.begin(), paths.end());
    CHECK(uniq.size() == paths.size());
}

TEST_CASE("N7 and N45 catalogs build completely") {
    Topology n7 = build_topology(load_topology_spec(test::data_path("n7.json")));
    PathCatalog c7 = precompute_paths(n7);
    int pairs = 0;
    for (NodeId s = 0; s < 7; ++s)
        for (NodeId d = 0; d < 7; ++d)
            if (s != d) {
                CHECK(c7.admissible_for(s, d).size() == 4);
                ++pairs;
            }
    CHECK(pairs == 42);

    Topology n45 = build_topology(load_topology_spec(test::data_path("n45.json")));
    CHECK(n45.non_cloud_node_count() == 45);
    CHECK(n45.servers.size() == 45 * 8 + 8);
    PathCatalog c45 = precompute_paths(n45);
    CHECK(c45.admissible_for(0, 44).size() == 4);
}
