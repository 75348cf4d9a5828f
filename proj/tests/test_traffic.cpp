#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "vnfopt/rng.hpp"
#include "vnfopt/traffic.hpp"

using namespace vnfopt;

namespace {

TrafficParams two_component_params() {
    TrafficParams p;
    p.alpha = 1.0;
    p.components = {{0.5, 2.0 * M_PI / 24.0, 0.0}, {0.25, 4.0 * M_PI / 24.0, M_PI / 3.0}};
    return p;
}

} // namespace

TEST_CASE("mean profile formula") {
    TrafficParams flat;
    flat.alpha = 3.0;
    flat.components = {{0.0, 1.0, 0.0}, {0.0, 2.0, 0.0}};
    for (int t = 0; t < 48; ++t) CHECK(mean_profile(t, flat) == 3.0);

    TrafficParams peak;
    peak.alpha = 0.0;
    peak.components = {{1.0, 2.0 * M_PI / 24.0, 0.0}};
    CHECK(mean_profile(6, peak) == doctest::Approx(1.0).epsilon(1e-12)); // omega*t = pi/2

    // independent re-evaluation at t = 5
    TrafficParams p = two_component_params();
    const double expected = 1.0 + 0.5 * std::sin(2.0 * M_PI / 24.0 * 5.0) +
                            0.25 * std::sin(4.0 * M_PI / 24.0 * 5.0 + M_PI / 3.0);
    CHECK(mean_profile(5, p) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("mean profile is exactly periodic") {
    TrafficParams p = two_component_params();
    for (int t = 0; t < 24; ++t) {
        CHECK(mean_profile(t, p) == mean_profile(t + 24, p));
        CHECK(mean_profile(t, p) == mean_profile(t + 24 * 1000, p));
    }
}

TEST_CASE("generate_series determinism and degenerate noise") {
    TrafficParams p = two_component_params();
    p.base_value = 10.0;

    p.cv = 0.0;
    auto exact = generate_series(42, p, 3);
    REQUIRE(exact.values.size() == 72);
    for (int t = 0; t < 72; ++t)
        CHECK(exact.values[t] == doctest::Approx(10.0 * mean_profile(t, p)).epsilon(1e-12));

    p.cv = 0.25;
    auto a = generate_series(7, p, 2);
    auto b = generate_series(7, p, 2);
    CHECK(a.values == b.values);
    auto c = generate_series(8, p, 2);
    CHECK(a.values != c.values);
    for (double v : a.values) CHECK(v > 0.0);
}

TEST_CASE("doubling base value doubles the cv=0 series") {
    TrafficParams p = two_component_params();
    p.cv = 0.0;
    p.base_value = 5.0;
    auto one = generate_series(1, p, 2);
    p.base_value = 10.0;
    auto two = generate_series(1, p, 2);
    for (size_t t = 0; t < one.values.size(); ++t)
        CHECK(two.values[t] == doctest::Approx(2.0 * one.values[t]).epsilon(1e-12));
}

TEST_CASE("non-positive mean profile is rejected") {
    TrafficParams p;
    p.alpha = 0.1;
    p.components = {{1.0, 2.0 * M_PI / 24.0, 0.0}};
    CHECK_THROWS_AS(generate_series(1, p, 1), std::invalid_argument);
}

TEST_CASE("lognormal sample mean tracks the profile" * doctest::timeout(60)) {
    TrafficParams p = two_component_params();
    p.cv = 0.1;
    p.base_value = 20.0;
    const int periods = 10000;
    auto s = generate_series(123, p, periods);
    for (int hour = 0; hour < 24; ++hour) {
        double sum = 0.0;
        for (int k = 0; k < periods; ++k) sum += s.values[static_cast<size_t>(k) * 24 + hour];
        const double mean = sum / periods;
        const double target = 20.0 * mean_profile(hour, p);
        CHECK(std::fabs(mean - target) / target < 0.02);
    }
}

TEST_CASE("demand set: one SFC per ordered pair, deterministic") {
    auto w = test::make_world(test::quad_spec());
    DatasetConfig cfg;
    cfg.periods = 2;
    auto ds = generate_demand_set(5, *w.topo, cfg);
    CHECK(ds.groups.size() == 12); // 4*3 ordered pairs
    for (const auto& g : ds.groups) {
        CHECK(g.flows.size() >= 1);
        CHECK(g.flows.size() <= 3);
        for (const auto& f : g.flows) {
            CHECK(f.base_value >= 1.0);
            CHECK(f.base_value <= 100.0);
            CHECK(f.values.size() == static_cast<size_t>(ds.samples()));
        }
    }
    auto ds2 = generate_demand_set(5, *w.topo, cfg);
    CHECK(dataset_to_json(ds) == dataset_to_json(ds2));

    Topology n7 = build_topology(load_topology_spec(test::data_path("n7.json")));
    auto ds7 = generate_demand_set(1, n7, cfg);
    CHECK(ds7.groups.size() == 42);
}

TEST_CASE("dataset json round trip") {
    auto w = test::make_world(test::quad_spec());
    DatasetConfig cfg;
    cfg.periods = 2;
    auto ds = generate_demand_set(9, *w.topo, cfg);
    auto back = dataset_from_json(dataset_to_json(ds));
    CHECK(dataset_to_json(back) == dataset_to_json(ds));
    CHECK(back.groups.size() == ds.groups.size());
    CHECK(back.groups[0].flows[0].values == ds.groups[0].flows[0].values);

    auto csv = dataset_to_csv(ds);
    CHECK(csv.find("src,dst,flow,base") == 0);
}
