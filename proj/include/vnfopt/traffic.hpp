#ifndef VNFOPT_TRAFFIC_HPP
#define VNFOPT_TRAFFIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vnfopt/topology.hpp"

namespace vnfopt {

struct SinComponent {
    double beta = 0.0;  // amplitude
    double omega = 0.0; // radians per sample
    double phi = 0.0;   // phase offset
};

// Diurnal traffic profile: alpha + sum_k beta_k * sin(omega_k * t + phi_k),
// periodic over samples_per_period samples, scaled by base_value, with
// multiplicative lognormal noise of fixed coefficient of variation.
struct TrafficParams {
    double alpha = 1.0;
    std::vector<SinComponent> components;
    int samples_per_period = 24;
    double cv = 0.1;
    double base_value = 1.0;
};

struct DemandSeries {
    int sfc_id = -1;
    int flow_id = -1;
    std::vector<double> values;
};

// Profile level at integer sample index (t is reduced mod samples_per_period
// so the mean is exactly periodic).
double mean_profile(std::int64_t t, const TrafficParams& p);

// Throws std::invalid_argument if the mean profile is not strictly positive
// somewhere in the period.
DemandSeries generate_series(std::uint64_t seed, const TrafficParams& p, int periods);

struct DemandFlow {
    double base_value = 0.0;
    std::vector<double> values;
};

struct DemandGroup {
    int src_external = -1; // external node ids as in the topology spec
    int dst_external = -1;
    std::vector<DemandFlow> flows;
};

struct DatasetConfig {
    int flows_min = 1;
    int flows_max = 3;
    double value_min = 1.0;
    double value_max = 100.0;
    int periods = 51;
    int samples_per_period = 24;
    double cv = 0.1;
    double alpha = 1.0;
    // per-flow amplitudes drawn uniformly from these ranges; omega fixed to
    // one and two cycles per period, phases uniform in [0, 2pi)
    double beta1_min = 0.20, beta1_max = 0.50;
    double beta2_min = 0.05, beta2_max = 0.25;
};

struct DemandDataset {
    std::uint64_t seed = 0;
    DatasetConfig config;
    std::vector<DemandGroup> groups; // one per ordered non-cloud node pair

    int samples() const { return config.periods * config.samples_per_period; }
};

// One SFC group per ordered non-cloud node pair, 1..3 flows each, base value
// uniform in [value_min, value_max], per-flow phases jittered. Deterministic
// given the seed.
DemandDataset generate_demand_set(std::uint64_t seed, const Topology& topo,
                                  const DatasetConfig& cfg);

void save_dataset(const DemandDataset& ds, const std::string& path);
DemandDataset load_dataset(const std::string& path);
std::string dataset_to_json(const DemandDataset& ds);
DemandDataset dataset_from_json(const std::string& text);

// one row per flow, one column per sample
std::string dataset_to_csv(const DemandDataset& ds);

} // namespace vnfopt

#endif
