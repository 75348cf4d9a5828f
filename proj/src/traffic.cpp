#include "vnfopt/traffic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vnfopt/rng.hpp"

namespace vnfopt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
}

double mean_profile(std::int64_t t, const TrafficParams& p) {
    const std::int64_t tr = ((t % p.samples_per_period) + p.samples_per_period) % p.samples_per_period;
    double y = p.alpha;
    for (const SinComponent& c : p.components)
        y += c.beta * std::sin(c.omega * static_cast<double>(tr) + c.phi);
    return y;
}

DemandSeries generate_series(std::uint64_t seed, const TrafficParams& p, int periods) {
    if (p.samples_per_period < 2) throw std::invalid_argument("samples_per_period must be >= 2");
    if (p.cv < 0.0) throw std::invalid_argument("cv must be non-negative");
    for (int t = 0; t < p.samples_per_period; ++t) {
        if (mean_profile(t, p) <= 0.0)
            throw std::invalid_argument("mean profile not strictly positive at sample " +
                                        std::to_string(t));
    }
    Rng rng(seed);
    DemandSeries s;
    s.values.reserve(static_cast<size_t>(periods) * p.samples_per_period);
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(periods) * p.samples_per_period; ++t) {
        const double mean = p.base_value * mean_profile(t, p);
        s.values.push_back(rng.lognormal_mean_std(mean, p.cv * mean));
    }
    return s;
}

namespace {

TrafficParams flow_params(Rng& rng, const DatasetConfig& cfg, double base_value) {
    TrafficParams p;
    p.alpha = cfg.alpha;
    p.samples_per_period = cfg.samples_per_period;
    p.cv = cfg.cv;
    p.base_value = base_value;
    const double w1 = kTwoPi / cfg.samples_per_period;
    p.components.push_back({rng.uniform(cfg.beta1_min, cfg.beta1_max), w1, rng.uniform(0.0, kTwoPi)});
    p.components.push_back({rng.uniform(cfg.beta2_min, cfg.beta2_max), 2.0 * w1, rng.uniform(0.0, kTwoPi)});
    return p;
}

} // namespace

DemandDataset generate_demand_set(std::uint64_t seed, const Topology& topo,
                                  const DatasetConfig& cfg) {
    DemandDataset ds;
    ds.seed = seed;
    ds.config = cfg;
    for (NodeId s = 0; s < topo.node_count(); ++s) {
        if (topo.is_cloud_node(s)) continue;
        for (NodeId d = 0; d < topo.node_count(); ++d) {
            if (d == s || topo.is_cloud_node(d)) continue;
            DemandGroup group;
            group.src_external = topo.nodes[s].external_id;
            group.dst_external = topo.nodes[d].external_id;
            Rng pair_rng(derive_seed(seed, {0x70617972ULL, static_cast<std::uint64_t>(group.src_external),
                                            static_cast<std::uint64_t>(group.dst_external)}));
            const int flows = static_cast<int>(pair_rng.uniform_int(cfg.flows_min, cfg.flows_max));
            for (int f = 0; f < flows; ++f) {
                const std::uint64_t flow_seed =
                    derive_seed(seed, {0x666c6f77ULL, static_cast<std::uint64_t>(group.src_external),
                                       static_cast<std::uint64_t>(group.dst_external),
                                       static_cast<std::uint64_t>(f)});
                Rng frng(flow_seed);
                DemandFlow flow;
                flow.base_value = frng.uniform(cfg.value_min, cfg.value_max);
                TrafficParams p = flow_params(frng, cfg, flow.base_value);
                flow.values = generate_series(frng.next_u64(), p, cfg.periods).values;
                group.flows.push_back(std::move(flow));
            }
            ds.groups.push_back(std::move(group));
        }
    }
    return ds;
}

std::string dataset_to_json(const DemandDataset& ds) {
    nlohmann::json j;
    j["seed"] = ds.seed;
    j["params"] = {{"flows_min", ds.config.flows_min},
                   {"flows_max", ds.config.flows_max},
                   {"value_min", ds.config.value_min},
                   {"value_max", ds.config.value_max},
                   {"periods", ds.config.periods},
                   {"samples_per_period", ds.config.samples_per_period},
                   {"cv", ds.config.cv},
                   {"alpha", ds.config.alpha},
                   {"beta1_min", ds.config.beta1_min},
                   {"beta1_max", ds.config.beta1_max},
                   {"beta2_min", ds.config.beta2_min},
                   {"beta2_max", ds.config.beta2_max}};
    nlohmann::json sfcs = nlohmann::json::array();
    for (const auto& g : ds.groups) {
        nlohmann::json jg;
        jg["src"] = g.src_external;
        jg["dst"] = g.dst_external;
        nlohmann::json flows = nlohmann::json::array();
        for (const auto& f : g.flows) flows.push_back({{"base", f.base_value}, {"values", f.values}});
        jg["flows"] = flows;
        sfcs.push_back(jg);
    }
    j["sfcs"] = sfcs;
    return j.dump();
}

DemandDataset dataset_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    DemandDataset ds;
    ds.seed = j.at("seed").get<std::uint64_t>();
    const auto& p = j.at("params");
    ds.config.flows_min = p.at("flows_min").get<int>();
    ds.config.flows_max = p.at("flows_max").get<int>();
    ds.config.value_min = p.at("value_min").get<double>();
    ds.config.value_max = p.at("value_max").get<double>();
    ds.config.periods = p.at("periods").get<int>();
    ds.config.samples_per_period = p.at("samples_per_period").get<int>();
    ds.config.cv = p.at("cv").get<double>();
    ds.config.alpha = p.at("alpha").get<double>();
    ds.config.beta1_min = p.value("beta1_min", ds.config.beta1_min);
    ds.config.beta1_max = p.value("beta1_max", ds.config.beta1_max);
    ds.config.beta2_min = p.value("beta2_min", ds.config.beta2_min);
    ds.config.beta2_max = p.value("beta2_max", ds.config.beta2_max);
    for (const auto& jg : j.at("sfcs")) {
        DemandGroup g;
        g.src_external = jg.at("src").get<int>();
        g.dst_external = jg.at("dst").get<int>();
        for (const auto& jf : jg.at("flows")) {
            DemandFlow f;
            f.base_value = jf.at("base").get<double>();
            f.values = jf.at("values").get<std::vector<double>>();
            g.flows.push_back(std::move(f));
        }
        ds.groups.push_back(std::move(g));
    }
    return ds;
}

void save_dataset(const DemandDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset: " + path);
    out << dataset_to_json(ds);
}

DemandDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return dataset_from_json(ss.str());
}

std::string dataset_to_csv(const DemandDataset& ds) {
    std::ostringstream out;
    out << "src,dst,flow,base";
    if (!ds.groups.empty() && !ds.groups[0].flows.empty()) {
        for (size_t t = 0; t < ds.groups[0].flows[0].values.size(); ++t) out << ",t" << t;
    }
    out << "\n";
    char buf[32];
    for (const auto& g : ds.groups) {
        for (size_t f = 0; f < g.flows.size(); ++f) {
            out << g.src_external << "," << g.dst_external << "," << f;
            std::snprintf(buf, sizeof buf, ",%.17g", g.flows[f].base_value);
            out << buf;
            for (double v : g.flows[f].values) {
                std::snprintf(buf, sizeof buf, ",%.17g", v);
                out << buf;
            }
            out << "\n";
        }
    }
    return out.str();
}

} // namespace vnfopt
