#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "test_support.hpp"

using namespace vnfopt;

namespace {

// route every demand of every SFC on its shortest path and stack all VNFs on
// the first server of the source node
PlacementSolution place_all_at_source(const Instance& inst) {
    PlacementSolution sol = PlacementSolution::empty_for(inst);
    for (size_t s = 0; s < inst.sfcs.size(); ++s) {
        const auto& sfc = inst.sfcs[s];
        const ServerId x = inst.topo().servers_at[sfc.src][0];
        for (size_t d = 0; d < sfc.demands.size(); ++d) {
            sol.demand_path[s][d] = sfc.admissible[0];
            for (size_t v = 0; v < sfc.vnfs.size(); ++v) sol.demand_server[s][v][d] = x;
        }
    }
    sol.rebuild_vnf_servers();
    return sol;
}

} // namespace

TEST_CASE("feasible single-VNF placement has no violations") {
    auto w = test::make_world(test::quad_spec());
    Instance inst = test::toy_instance(w, 0, 1, 1, {100.0});
    PlacementSolution sol = place_all_at_source(inst);
    CHECK(check_feasibility(sol, inst).empty());
}

TEST_CASE("ordering violation is reported") {
    auto w = test::make_world(test::quad_spec());
    Instance inst = test::toy_instance(w, 0, 1, 2, {10.0}, 0.1, 1.0);
    PlacementSolution sol = PlacementSolution::empty_for(inst);
    const PathId p = inst.sfcs[0].admissible[0]; // direct 0 -> 1
    sol.demand_path[0][0] = p;
    // VNF 0 at the destination, VNF 1 back at the source
    sol.demand_server[0][0][0] = inst.topo().servers_at[1][0];
    sol.demand_server[0][1][0] = inst.topo().servers_at[0][0];
    sol.rebuild_vnf_servers();
    auto viols = check_feasibility(sol, inst);
    bool found = false;
    for (const auto& v : viols) found = found || v.kind == Violation::Kind::OrderViolation;
    CHECK(found);
}

TEST_CASE("non-replicable VNF with two instances is a violation") {
    auto w = test::make_world(test::quad_spec());
    Instance inst = test::toy_instance(w, 0, 1, 1, {10.0, 20.0}, 0.1, 1.0);
    inst.sfcs[0].vnfs[0].replicable = false;
    PlacementSolution sol = PlacementSolution::empty_for(inst);
    const auto& paths = inst.sfcs[0].admissible;
    sol.demand_path[0][0] = paths[0];
    sol.demand_path[0][1] = paths[0];
    sol.demand_server[0][0][0] = inst.topo().servers_at[0][0];
    sol.demand_server[0][0][1] = inst.topo().servers_at[1][0];
    sol.rebuild_vnf_servers();
    // complete the sync paths so only the replicability violation remains
    sol.sync_paths[0][0] = {w.catalog->sync_path[0][1]};
    auto viols = check_feasibility(sol, inst);
    REQUIRE(viols.size() == 1);
    CHECK(viols[0].kind == Violation::Kind::ReplicabilityViolation);
}

TEST_CASE("missing and unexpected sync paths are violations") {
    auto w = test::make_world(test::quad_spec());
    Instance inst = test::toy_instance(w, 0, 1, 1, {10.0, 20.0}, 0.1, 1.0);
    PlacementSolution sol = PlacementSolution::empty_for(inst);
    const auto& paths = inst.sfcs[0].admissible;
    sol.demand_path[0][0] = paths[0];
    sol.demand_path[0][1] = paths[1];
    sol.demand_server[0][0][0] = inst.topo().servers_at[0][0];
    sol.demand_server[0][0][1] = inst.topo().servers_at[1][0];
    sol.rebuild_vnf_servers();

    auto viols = check_feasibility(sol, inst);
    REQUIRE(viols.size() == 1);
    CHECK(viols[0].kind == Violation::Kind::SyncPathMissing);

    sol.sync_paths[0][0] = {w.catalog->sync_path[1][0]}; // wrong direction
    viols = check_feasibility(sol, inst);
    CHECK(viols.size() == 2);

    sol.sync_paths[0][0] = {w.catalog->sync_path[0][1]};
    CHECK(check_feasibility(sol, inst).empty());
}

TEST_CASE("link utilization matches the hand computation") {
    auto w = test::make_world(test::quad_spec(500.0));
    Instance inst = test::toy_instance(w, 0, 1, 1, {100.0, 50.0}, 0.5, 0.0, 0.1);

    PlacementSolution sol = PlacementSolution::empty_for(inst);
    CHECK(link_utilization(sol, inst).traffic == std::vector<double>(w.topo->links.size(), 0.0));

    const PathId direct = inst.sfcs[0].admissible[0];
    const LinkId direct_link = w.catalog->path(direct).links[0];
    sol.demand_path[0][0] = direct;
    sol.demand_server[0][0][0] = w.topo->servers_at[0][0];
    // second demand kept off the direct link (two-hop path)
    sol.demand_path[0][1] = inst.sfcs[0].admissible[1];
    sol.demand_server[0][0][1] = w.topo->servers_at[0][0];
    sol.rebuild_vnf_servers();
    auto usage = link_utilization(sol, inst);
    CHECK(usage.util[direct_link] == doctest::Approx(100.0 / 500.0).epsilon(1e-12));

    // replicate VNF 0 onto node 1: sync crosses the direct link;
    // Γ_syn = 0.1, |Λ_s| = 150 under the total-traffic reading
    sol.demand_server[0][0][1] = w.topo->servers_at[1][0];
    sol.rebuild_vnf_servers();
    sol.sync_paths[0][0] = {w.catalog->sync_path[0][1]};
    REQUIRE(w.catalog->path(w.catalog->sync_path[0][1]).links[0] == direct_link);
    usage = link_utilization(sol, inst);
    CHECK(usage.util[direct_link] == doctest::Approx((100.0 + 15.0) / 500.0).epsilon(1e-12));

    // demand-count reading of |Λ_s|
    inst.sync_mode = SyncTrafficMode::DemandCount;
    usage = link_utilization(sol, inst);
    CHECK(usage.util[direct_link] == doctest::Approx((100.0 + 0.2) / 500.0).epsilon(1e-12));
}

TEST_CASE("cloud links report zero utilization") {
    auto w = test::make_world(test::quad_spec());
    Instance inst = test::toy_instance(w, 0, 1, 1, {100.0});
    PlacementSolution sol = PlacementSolution::empty_for(inst);
    const PathId via_cloud = inst.sfcs[0].admissible[3];
    REQUIRE(w.catalog->path(via_cloud).via_cloud);
    sol.demand_path[0][0] = via_cloud;
    sol.demand_server[0][0][0] = w.topo->servers_at[w.topo->cloud_node][0];
    sol.rebuild_vnf_servers();
    auto usage = link_utilization(sol, inst);
    for (LinkId l : w.catalog->path(via_cloud).links) {
        CHECK(usage.traffic[l] == 100.0);
        CHECK(usage.util[l] == 0.0);
    }
    CHECK(check_feasibility(sol, inst).empty());
}

TEST_CASE("server load follows the load-plus-overhead rule") {
    auto w = test::make_world(test::quad_spec());
    Instance inst = test::toy_instance(w, 0, 1, 1, {100.0, 50.0}, 0.5, 7.0);
    PlacementSolution sol = PlacementSolution::empty_for(inst);
    CHECK(server_load(sol, inst).load == std::vector<double>(w.topo->servers.size(), 0.0));

    sol = place_all_at_source(inst);
    const ServerId x = w.topo->servers_at[0][0];
    auto usage = server_load(sol, inst);
    CHECK(usage.load[x] == doctest::Approx(0.5 * 150.0 + 7.0).epsilon(1e-12));

    // a listed instance with no assigned demand still pays the VM overhead
    const ServerId y = w.topo->servers_at[1][0];
    sol.vnf_servers[0][0].push_back(y);
    std::sort(sol.vnf_servers[0][0].begin(), sol.vnf_servers[0][0].end());
    usage = server_load(sol, inst);
    CHECK(usage.load[y] == doctest::Approx(7.0).epsilon(1e-12));
    bool flagged = false;
    for (const auto& v : check_feasibility(sol, inst))
        flagged = flagged || v.kind == Violation::Kind::InstanceWithoutDemand;
    CHECK(flagged);
}

TEST_CASE("processing delay constants and boundary") {
    auto w = test::make_world(test::quad_spec(500.0, 1000.0));
    // zero traffic on an otherwise empty server: only the minimum term remains
    {
        Instance inst = test::toy_instance(w, 0, 1, 1, {10.0}, 0.5, 0.0);
        PlacementSolution sol = place_all_at_source(inst);
        const ServerId y = w.topo->servers_at[1][0];
        sol.vnf_servers[0][0].push_back(y);
        std::sort(sol.vnf_servers[0][0].begin(), sol.vnf_servers[0][0].end());
        CHECK(processing_delay_s(sol, inst, 0, 0, y) == 0.002);
    }
    // full proq load and u_x = 1 hits d_pro_max exactly
    {
        Instance inst = test::toy_instance(w, 0, 1, 1, {1000.0}, 1.0, 0.0);
        inst.sfcs[0].vnfs[0].proc_capacity = 1000.0;
        PlacementSolution sol = place_all_at_source(inst);
        const ServerId x = w.topo->servers_at[0][0];
        const double d = processing_delay_s(sol, inst, 0, 0, x);
        CHECK(d == 0.003 * (1.0 * 1000.0) / 1000.0 + 0.002 + 0.005 * 1.0);
        CHECK(d == doctest::Approx(0.010).epsilon(1e-12));
        CHECK(check_feasibility(sol, inst).empty()); // boundary is allowed
    }
    // half load, u_x = 0.5
    {
        Instance inst = test::toy_instance(w, 0, 1, 1, {500.0}, 1.0, 0.0);
        inst.sfcs[0].vnfs[0].proc_capacity = 1000.0;
        PlacementSolution sol = place_all_at_source(inst);
        const ServerId x = w.topo->servers_at[0][0];
        CHECK(processing_delay_s(sol, inst, 0, 0, x) ==
              doctest::Approx(0.003 * 0.5 + 0.002 + 0.005 * 0.5).epsilon(1e-12));
    }
    // not placed on that server
    Instance inst = test::toy_instance(w, 0, 1, 1, {1.0});
    PlacementSolution sol = place_all_at_source(inst);
    CHECK_THROWS_AS(processing_delay_s(sol, inst, 0, 0, w.topo->servers_at[2][0]),
                    std::invalid_argument);
}

TEST_CASE("downtime counts abandoned prior instances") {
    auto w = test::make_world(test::quad_spec());
    Instance inst = test::toy_instance(w, 0, 1, 2, {10.0}, 0.1, 1.0);
    PlacementSolution sol = place_all_at_source(inst);
    PriorPlacement prior = to_prior(sol);
    CHECK(downtime_s(sol, inst, &prior, 0) == 0.0);
    CHECK(downtime_s(sol, inst, nullptr, 0) == 0.0);

    // both prior instances elsewhere: two abandonments
    PriorPlacement moved = prior;
    moved.servers[0][0] = {w.topo->servers_at[2][0]};
    moved.servers[0][1] = {w.topo->servers_at[2][0]};
    CHECK(downtime_s(sol, inst, &moved, 0) == 0.0275 * 2);
    CHECK(downtime_s(sol, inst, &moved, 0) == doctest::Approx(0.055).epsilon(1e-12));

    // a new replica elsewhere is not a migration
    PlacementSolution with_replica = sol;
    with_replica.vnf_servers[0][0].push_back(w.topo->servers_at[1][0]);
    std::sort(with_replica.vnf_servers[0][0].begin(), with_replica.vnf_servers[0][0].end());
    CHECK(downtime_s(with_replica, inst, &prior, 0) == 0.0);
}

TEST_CASE("demand delay is the exact component sum") {
    auto w = test::make_world(test::quad_spec(500.0, 1000.0));
    Instance inst = test::toy_instance(w, 0, 1, 1, {500.0}, 1.0, 0.0);
    inst.sfcs[0].vnfs[0].proc_capacity = 1000.0;
    PlacementSolution sol = place_all_at_source(inst);
    const PathId p = sol.demand_path[0][0];

    DelayBreakdown d = demand_delay(sol, inst, nullptr, 0, 0);
    CHECK(d.propagation_s == w.catalog->path(p).delay_s);
    CHECK(d.processing_s == doctest::Approx(0.003 * 0.5 + 0.002 + 0.005 * 0.5).epsilon(1e-12));
    CHECK(d.downtime_s == 0.0);
    CHECK(d.total_s() == d.propagation_s + d.processing_s + d.downtime_s);

    PriorPlacement moved;
    moved.servers = {{{w.topo->servers_at[2][0]}}};
    DelayBreakdown d2 = demand_delay(sol, inst, &moved, 0, 0);
    CHECK(d2.downtime_s == 0.0275);
    CHECK(d2.total_s() == doctest::Approx(d.total_s() + 0.0275).epsilon(1e-12));

    Instance empty_chain = test::toy_instance(w, 0, 1, 0, {10.0});
    PlacementSolution sol2 = PlacementSolution::empty_for(empty_chain);
    sol2.demand_path[0][0] = empty_chain.sfcs[0].admissible[0];
    CHECK_THROWS_AS(demand_delay(sol2, empty_chain, nullptr, 0, 0), std::invalid_argument);
}

TEST_CASE("objective decomposition and linearity") {
    auto w = test::make_world(test::quad_spec());
    Instance inst = test::toy_instance(w, 0, 1, 1, {10.0, 20.0, 5.0}, 0.01, 0.5);
    PlacementSolution sol = place_all_at_source(inst);
    PriorPlacement prior = to_prior(sol);
    ObjectiveWeights w111;

    auto obj = objective(sol, inst, &prior, w111);
    CHECK(obj.migrations == 0);
    CHECK(obj.replications == 0);
    CHECK(obj.cloud_vnfs == 0);
    CHECK(obj.value == 0.0);

    // move the single instance: one migration
    PlacementSolution moved = sol;
    const ServerId y = w.topo->servers_at[1][0];
    for (size_t d = 0; d < 3; ++d) moved.demand_server[0][0][d] = y;
    moved.rebuild_vnf_servers();
    obj = objective(moved, inst, &prior, w111);
    CHECK(obj.migrations == 1);
    CHECK(obj.replications == 0);
    CHECK(obj.value == 1.0);

    // three instances, one in the cloud, prior kept: r=2, c=1
    PlacementSolution spread = sol;
    spread.demand_server[0][0][1] = y;
    spread.demand_server[0][0][2] = w.topo->servers_at[w.topo->cloud_node][0];
    spread.rebuild_vnf_servers();
    obj = objective(spread, inst, &prior, w111);
    CHECK(obj.migrations == 0);
    CHECK(obj.replications == 2);
    CHECK(obj.cloud_vnfs == 1);
    CHECK(obj.value == 3.0);

    auto doubled = objective(spread, inst, &prior, ObjectiveWeights{2.0, 2.0, 2.0});
    CHECK(doubled.value == 2.0 * obj.value);
}

TEST_CASE("to_prior copies instance sets only") {
    auto w = test::make_world(test::quad_spec());
    Instance inst = test::toy_instance(w, 0, 1, 2, {10.0}, 0.1, 1.0);
    PlacementSolution sol = place_all_at_source(inst);
    PriorPlacement prior = to_prior(sol);
    CHECK(prior.servers == sol.vnf_servers);
    CHECK(objective(sol, inst, &prior, {}).migrations == 0);

    PlacementSolution other_path = sol;
    other_path.demand_path[0][0] = inst.sfcs[0].admissible[1];
    CHECK(to_prior(other_path).servers == prior.servers);

    PlacementSolution empty;
    CHECK(to_prior(empty).servers.empty());
}

TEST_CASE("solution json round trip") {
    auto w = test::make_world(test::quad_spec());
    Instance inst = test::toy_instance(w, 0, 1, 2, {10.0, 5.0});
    PlacementSolution sol = place_all_at_source(inst);
    PlacementSolution back = solution_from_json(solution_to_json(sol));
    CHECK(back.demand_path == sol.demand_path);
    CHECK(back.demand_server == sol.demand_server);
    CHECK(back.vnf_servers == sol.vnf_servers);
    CHECK(back.sync_paths == sol.sync_paths);
}

TEST_CASE("metrics report aggregates and flags overloads") {
    auto w = test::make_world(test::quad_spec(500.0, 100.0));
    Instance inst = test::toy_instance(w, 0, 1, 1, {300.0}, 1.0, 0.0);
    PlacementSolution sol = place_all_at_source(inst);
    MetricsReport m = build_metrics(sol, inst, nullptr, {});
    CHECK(m.mean_server_util > 0.0);
    bool over = false;
    for (const auto& v : m.violations) over = over || v.kind == Violation::Kind::ServerOverCapacity;
    CHECK(over);
    CHECK(m.demand_delay[0][0].has_value());
}

TEST_CASE("malformed references throw instead of reporting violations") {
    auto w = test::make_world(test::quad_spec());
    Instance inst = test::toy_instance(w, 0, 1, 1, {10.0});
    PlacementSolution sol = place_all_at_source(inst);
    sol.demand_server[0][0][0] = 10'000;
    CHECK_THROWS_AS(check_feasibility(sol, inst), std::out_of_range);
    PlacementSolution wrong_shape = PlacementSolution::empty_for(inst);
    wrong_shape.demand_path.emplace_back();
    CHECK_THROWS_AS(check_feasibility(wrong_shape, inst), std::out_of_range);
}
