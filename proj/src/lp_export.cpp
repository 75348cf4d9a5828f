#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vnfopt/solvers.hpp"

namespace vnfopt {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

struct Row {
    std::ostringstream text;
    bool empty = true;

    void term(double coef, const std::string& var) {
        if (coef == 0.0) return;
        text << (coef < 0.0 ? " - " : " + ") << num(std::fabs(coef)) << " " << var;
        empty = false;
    }
};

struct LpWriter {
    std::ostringstream body;
    std::vector<std::string> binaries;
    std::vector<std::string> bounded;

    void constraint(const std::string& name, Row& lhs, const char* rel, double rhs) {
        body << " " << name << ":";
        if (lhs.empty) body << " 0 " << "x_zero";
        else body << lhs.text.str();
        body << " " << rel << " " << num(rhs) << "\n";
    }
};

} // namespace

std::string export_lp(const Instance& inst, const PriorPlacement* prior,
                      const ObjectiveWeights& weights) {
    const Topology& topo = inst.topo();
    const PathCatalog& cat = inst.paths();
    const int S = static_cast<int>(inst.sfcs.size());

    // servers reachable by each SFC: union over its admissible paths
    std::vector<std::vector<ServerId>> rel(S);
    for (int s = 0; s < S; ++s) {
        std::set<ServerId> u;
        for (PathId p : inst.sfcs[s].admissible)
            for (ServerId x : cat.path(p).servers) u.insert(x);
        rel[s].assign(u.begin(), u.end());
    }
    std::set<ServerId> any_rel_set;
    for (const auto& r : rel) any_rel_set.insert(r.begin(), r.end());
    std::vector<ServerId> any_rel(any_rel_set.begin(), any_rel_set.end());

    auto zd = [](int s, PathId p, int l) {
        return "z_s" + std::to_string(s) + "_p" + std::to_string(p) + "_l" + std::to_string(l);
    };
    auto zs = [](int s, PathId p) { return "zs_s" + std::to_string(s) + "_p" + std::to_string(p); };
    auto fv = [](int s, int v, ServerId x) {
        return "f_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" + std::to_string(x);
    };
    auto fl = [](int s, int v, ServerId x, int l) {
        return "fl_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" + std::to_string(x) +
               "_l" + std::to_string(l);
    };
    auto fx = [](ServerId x) { return "fx_x" + std::to_string(x); };
    auto ov = [](int s, int v, ServerId x) {
        return "o_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" + std::to_string(x);
    };
    auto gv = [](int s, int v, ServerId x, ServerId y) {
        return "g_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" + std::to_string(x) +
               "_y" + std::to_string(y);
    };
    auto hv = [](int s, int v, PathId p) {
        return "h_s" + std::to_string(s) + "_v" + std::to_string(v) + "_p" + std::to_string(p);
    };
    auto dq = [](int s, int v, ServerId x) {
        return "dq_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" + std::to_string(x);
    };
    auto dxv = [](int s, int v, ServerId x) {
        return "dx_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" + std::to_string(x);
    };
    auto dpv = [](int s, int v, ServerId x) {
        return "dp_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" + std::to_string(x);
    };
    auto dl = [](int s, int v, ServerId x, int l) {
        return "dl_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" + std::to_string(x) +
               "_l" + std::to_string(l);
    };
    auto dw = [](int s) { return "dw_s" + std::to_string(s); };
    auto dt = [](int s, PathId p, int l) {
        return "dt_s" + std::to_string(s) + "_p" + std::to_string(p) + "_l" + std::to_string(l);
    };
    auto ul = [](LinkId l) { return "u_l" + std::to_string(l); };
    auto ux = [](ServerId x) { return "u_x" + std::to_string(x); };

    auto prior_has = [&](int s, int v, ServerId x) {
        if (prior == nullptr || prior->empty()) return false;
        const auto& xs = prior->servers[s][v];
        return std::binary_search(xs.begin(), xs.end(), x);
    };

    LpWriter w;

    // objective: migrations + replications + cloud placements over f vars
    std::ostringstream obj;
    double constant = 0.0;
    for (int s = 0; s < S; ++s) {
        const int V = static_cast<int>(inst.sfcs[s].vnfs.size());
        constant -= weights.replication * V;
        for (int v = 0; v < V; ++v) {
            if (prior != nullptr && !prior->empty())
                constant += weights.migration * static_cast<double>(prior->servers[s][v].size());
            for (ServerId x : rel[s]) {
                double coef = weights.replication;
                if (topo.servers[x].is_cloud) coef += weights.cloud;
                if (prior_has(s, v, x)) coef -= weights.migration;
                if (coef != 0.0)
                    obj << (coef < 0.0 ? " - " : " + ") << num(std::fabs(coef)) << " " << fv(s, v, x);
            }
        }
    }
    if (constant != 0.0) obj << (constant < 0.0 ? " - " : " + ") << num(std::fabs(constant));

    for (int s = 0; s < S; ++s) {
        const auto& sfc = inst.sfcs[s];
        const int V = static_cast<int>(sfc.vnfs.size());
        const int L = static_cast<int>(sfc.demands.size());

        for (int l = 0; l < L; ++l) {
            Row r;
            for (PathId p : sfc.admissible) r.term(1.0, zd(s, p, l));
            w.constraint("c_onepath_s" + std::to_string(s) + "_l" + std::to_string(l), r, "=", 1.0);
        }
        for (PathId p : sfc.admissible) {
            for (int l = 0; l < L; ++l) {
                Row r;
                r.term(1.0, zd(s, p, l));
                r.term(-1.0, zs(s, p));
                w.constraint("c_actpath_lo_s" + std::to_string(s) + "_p" + std::to_string(p) +
                                 "_l" + std::to_string(l),
                             r, "<=", 0.0);
                w.binaries.push_back(zd(s, p, l));
            }
            Row hi;
            hi.term(1.0, zs(s, p));
            for (int l = 0; l < L; ++l) hi.term(-1.0, zd(s, p, l));
            w.constraint("c_actpath_hi_s" + std::to_string(s) + "_p" + std::to_string(p), hi, "<=",
                         0.0);
            w.binaries.push_back(zs(s, p));
        }

        for (int v = 0; v < V; ++v) {
            for (int l = 0; l < L; ++l) {
                Row r;
                for (ServerId x : rel[s]) r.term(1.0, fl(s, v, x, l));
                w.constraint("c_onesrv_s" + std::to_string(s) + "_v" + std::to_string(v) + "_l" +
                                 std::to_string(l),
                             r, "=", 1.0);
            }
            for (ServerId x : rel[s]) {
                for (int l = 0; l < L; ++l) {
                    Row r;
                    r.term(1.0, fl(s, v, x, l));
                    r.term(-1.0, fv(s, v, x));
                    w.constraint("c_map_lo_s" + std::to_string(s) + "_v" + std::to_string(v) +
                                     "_x" + std::to_string(x) + "_l" + std::to_string(l),
                                 r, "<=", 0.0);
                    w.binaries.push_back(fl(s, v, x, l));
                }
                Row hi;
                hi.term(1.0, fv(s, v, x));
                for (int l = 0; l < L; ++l) hi.term(-1.0, fl(s, v, x, l));
                w.constraint("c_map_hi_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" +
                                 std::to_string(x),
                             hi, "<=", 0.0);
                w.binaries.push_back(fv(s, v, x));
            }

            // replica count bounded by activated paths (replicable types only)
            Row r;
            for (ServerId x : rel[s]) r.term(1.0, fv(s, v, x));
            if (sfc.vnfs[v].replicable) {
                for (PathId p : sfc.admissible) r.term(-1.0, zs(s, p));
                w.constraint("c_repl_s" + std::to_string(s) + "_v" + std::to_string(v), r, "<=",
                             0.0);
            } else {
                w.constraint("c_repl_s" + std::to_string(s) + "_v" + std::to_string(v), r, "<=",
                             1.0);
            }
        }

        // every VNF of a routed demand sits on the demand's path, in order
        for (PathId p : sfc.admissible) {
            const Path& path = cat.path(p);
            for (int l = 0; l < L; ++l) {
                for (int v = 0; v < V; ++v) {
                    Row r;
                    r.term(1.0, zd(s, p, l));
                    for (ServerId x : path.servers) r.term(-1.0, fl(s, v, x, l));
                    w.constraint("c_onpath_s" + std::to_string(s) + "_p" + std::to_string(p) +
                                     "_l" + std::to_string(l) + "_v" + std::to_string(v),
                                 r, "<=", 0.0);
                }
                for (int v = 1; v < V; ++v) {
                    for (size_t n = 0; n < path.nodes.size(); ++n) {
                        Row r;
                        for (size_t m = 0; m <= n; ++m)
                            for (ServerId y : topo.servers_at[path.nodes[m]])
                                r.term(1.0, fl(s, v - 1, y, l));
                        for (ServerId x : topo.servers_at[path.nodes[n]])
                            r.term(-1.0, fl(s, v, x, l));
                        r.term(-1.0, zd(s, p, l));
                        w.constraint("c_order_s" + std::to_string(s) + "_p" + std::to_string(p) +
                                         "_l" + std::to_string(l) + "_v" + std::to_string(v) +
                                         "_n" + std::to_string(n),
                                     r, ">=", -1.0);
                    }
                }
            }
        }

        // original instance marker and replica pair indicators drive the
        // selection of one designated sync path per (origin, replica) node pair
        for (int v = 0; v < V; ++v) {
            Row sum;
            for (size_t i = 0; i < rel[s].size(); ++i) {
                const ServerId x = rel[s][i];
                Row le;
                le.term(1.0, ov(s, v, x));
                le.term(-1.0, fv(s, v, x));
                w.constraint("c_orig_le_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" +
                                 std::to_string(x),
                             le, "<=", 0.0);
                Row ge;
                ge.term(1.0, ov(s, v, x));
                ge.term(-1.0, fv(s, v, x));
                for (size_t j = 0; j < i; ++j) {
                    const ServerId x2 = rel[s][j];
                    Row ex;
                    ex.term(1.0, ov(s, v, x));
                    ex.term(1.0, fv(s, v, x2));
                    w.constraint("c_orig_ex_s" + std::to_string(s) + "_v" + std::to_string(v) +
                                     "_x" + std::to_string(x) + "_x" + std::to_string(x2),
                                 ex, "<=", 1.0);
                    ge.term(1.0, fv(s, v, x2));
                }
                w.constraint("c_orig_ge_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" +
                                 std::to_string(x),
                             ge, ">=", 0.0);
                sum.term(1.0, ov(s, v, x));
                w.binaries.push_back(ov(s, v, x));
            }
            w.constraint("c_orig_sum_s" + std::to_string(s) + "_v" + std::to_string(v), sum, "=",
                         1.0);

            for (ServerId x : rel[s]) {
                for (ServerId y : rel[s]) {
                    if (topo.servers[x].node == topo.servers[y].node) continue;
                    Row g1, g2, g3;
                    g1.term(1.0, gv(s, v, x, y));
                    g1.term(-1.0, ov(s, v, x));
                    w.constraint("c_g1_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" +
                                     std::to_string(x) + "_y" + std::to_string(y),
                                 g1, "<=", 0.0);
                    g2.term(1.0, gv(s, v, x, y));
                    g2.term(-1.0, fv(s, v, y));
                    w.constraint("c_g2_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" +
                                     std::to_string(x) + "_y" + std::to_string(y),
                                 g2, "<=", 0.0);
                    g3.term(1.0, gv(s, v, x, y));
                    g3.term(-1.0, ov(s, v, x));
                    g3.term(-1.0, fv(s, v, y));
                    w.constraint("c_g3_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" +
                                     std::to_string(x) + "_y" + std::to_string(y),
                                 g3, ">=", -1.0);
                    w.binaries.push_back(gv(s, v, x, y));
                }
            }

            std::set<NodeId> rel_nodes;
            for (ServerId x : rel[s]) rel_nodes.insert(topo.servers[x].node);
            for (NodeId n : rel_nodes) {
                for (NodeId m : rel_nodes) {
                    if (n == m) continue;
                    const PathId q = cat.sync_path[n][m];
                    Row used;
                    used.term(1.0, hv(s, v, q));
                    for (ServerId x : rel[s]) {
                        if (topo.servers[x].node != n) continue;
                        for (ServerId y : rel[s]) {
                            if (topo.servers[y].node != m) continue;
                            Row need;
                            need.term(1.0, gv(s, v, x, y));
                            need.term(-1.0, hv(s, v, q));
                            w.constraint("c_sync_need_s" + std::to_string(s) + "_v" +
                                             std::to_string(v) + "_x" + std::to_string(x) + "_y" +
                                             std::to_string(y),
                                         need, "<=", 0.0);
                            used.term(-1.0, gv(s, v, x, y));
                        }
                    }
                    w.constraint("c_sync_used_s" + std::to_string(s) + "_v" + std::to_string(v) +
                                     "_n" + std::to_string(n) + "_m" + std::to_string(m),
                                 used, "<=", 0.0);
                    w.binaries.push_back(hv(s, v, q));
                }
            }
        }
    }

    // server-used indicator (Eq. 8)
    for (ServerId x : any_rel) {
        Row lo, hi;
        for (int s = 0; s < S; ++s) {
            if (!std::binary_search(rel[s].begin(), rel[s].end(), x)) continue;
            const int V = static_cast<int>(inst.sfcs[s].vnfs.size());
            for (int v = 0; v < V; ++v) {
                lo.term(1.0 / (S * V), fv(s, v, x));
                hi.term(-1.0, fv(s, v, x));
            }
        }
        lo.term(-1.0, fx(x));
        w.constraint("c_used_lo_x" + std::to_string(x), lo, "<=", 0.0);
        hi.term(1.0, fx(x));
        w.constraint("c_used_hi_x" + std::to_string(x), hi, "<=", 0.0);
        w.binaries.push_back(fx(x));
    }

    // link utilization (demand routing + synchronization traffic)
    for (const Link& link : topo.links) {
        if (link.cloud_adjacent) continue;
        Row r;
        r.term(link.capacity, ul(link.id));
        for (int s = 0; s < S; ++s) {
            const auto& sfc = inst.sfcs[s];
            for (PathId p : sfc.admissible) {
                if (!cat.path(p).uses_link(link.id)) continue;
                for (size_t l = 0; l < sfc.demands.size(); ++l)
                    r.term(-sfc.demands[l].value, zd(s, p, static_cast<int>(l)));
            }
            const double lam = inst.sync_mode == SyncTrafficMode::TotalTraffic
                                   ? sfc.total_demand()
                                   : static_cast<double>(sfc.demands.size());
            std::set<NodeId> rel_nodes;
            for (ServerId x : rel[s]) rel_nodes.insert(topo.servers[x].node);
            for (int v = 0; v < static_cast<int>(sfc.vnfs.size()); ++v) {
                for (NodeId n : rel_nodes)
                    for (NodeId m : rel_nodes) {
                        if (n == m) continue;
                        const PathId q = cat.sync_path[n][m];
                        if (cat.path(q).uses_link(link.id))
                            r.term(-sfc.vnfs[v].sync_ratio * lam, hv(s, v, q));
                    }
            }
        }
        w.constraint("c_lutil_l" + std::to_string(link.id), r, "=", 0.0);
        w.bounded.push_back(ul(link.id));
    }

    // server load and utilization
    for (ServerId x : any_rel) {
        if (topo.servers[x].is_cloud) continue;
        Row r;
        r.term(topo.servers[x].capacity, ux(x));
        for (int s = 0; s < S; ++s) {
            if (!std::binary_search(rel[s].begin(), rel[s].end(), x)) continue;
            const auto& sfc = inst.sfcs[s];
            for (int v = 0; v < static_cast<int>(sfc.vnfs.size()); ++v) {
                for (size_t l = 0; l < sfc.demands.size(); ++l)
                    r.term(-sfc.vnfs[v].load_ratio * sfc.demands[l].value,
                           fl(s, v, x, static_cast<int>(l)));
                r.term(-sfc.vnfs[v].overhead, fv(s, v, x));
            }
        }
        w.constraint("c_xutil_x" + std::to_string(x), r, "=", 0.0);
        w.bounded.push_back(ux(x));
    }

    // processing, downtime and end-to-end delay
    for (int s = 0; s < S; ++s) {
        const auto& sfc = inst.sfcs[s];
        const int V = static_cast<int>(sfc.vnfs.size());
        const int L = static_cast<int>(sfc.demands.size());
        for (int v = 0; v < V; ++v) {
            const VnfSpec& vnf = sfc.vnfs[v];
            for (ServerId x : rel[s]) {
                Row q;
                q.term(1.0, dq(s, v, x));
                for (int l = 0; l < L; ++l)
                    q.term(-vnf.d_proq_s * vnf.load_ratio * sfc.demands[l].value /
                               vnf.proc_capacity,
                           fl(s, v, x, l));
                w.constraint("c_dq_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" +
                                 std::to_string(x),
                             q, "=", 0.0);
                Row xv;
                xv.term(1.0, dxv(s, v, x));
                xv.term(-vnf.d_prox_min_s, fv(s, v, x));
                if (!topo.servers[x].is_cloud) xv.term(-vnf.d_prox_s, ux(x));
                w.constraint("c_dx_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" +
                                 std::to_string(x),
                             xv, "=", 0.0);
                Row pro;
                pro.term(1.0, dpv(s, v, x));
                pro.term(-1.0, dq(s, v, x));
                pro.term(-1.0, dxv(s, v, x));
                w.constraint("c_dp_s" + std::to_string(s) + "_v" + std::to_string(v) + "_x" +
                                 std::to_string(x),
                             pro, "=", 0.0);
                for (int l = 0; l < L; ++l) {
                    Row lo;
                    lo.term(1.0, dl(s, v, x, l));
                    lo.term(-1.0, dpv(s, v, x));
                    lo.term(-vnf.d_pro_max_s, fl(s, v, x, l));
                    w.constraint("c_dl_lo_s" + std::to_string(s) + "_v" + std::to_string(v) +
                                     "_x" + std::to_string(x) + "_l" + std::to_string(l),
                                 lo, ">=", -vnf.d_pro_max_s);
                    Row hi;
                    hi.term(1.0, dl(s, v, x, l));
                    hi.term(-vnf.d_pro_max_s, fl(s, v, x, l));
                    w.constraint("c_dl_hi_s" + std::to_string(s) + "_v" + std::to_string(v) +
                                     "_x" + std::to_string(x) + "_l" + std::to_string(l),
                                 hi, "<=", 0.0);
                }
            }
        }

        Row dwr;
        dwr.term(1.0, dw(s));
        double prior_count = 0.0;
        if (prior != nullptr && !prior->empty()) {
            for (int v = 0; v < V; ++v) {
                for (ServerId x : prior->servers[s][v]) {
                    prior_count += 1.0;
                    if (std::binary_search(rel[s].begin(), rel[s].end(), x))
                        dwr.term(inst.downtime_per_migration_s, fv(s, v, x));
                }
            }
        }
        w.constraint("c_dwt_s" + std::to_string(s), dwr, "=",
                     inst.downtime_per_migration_s * prior_count);

        for (PathId p : sfc.admissible) {
            const Path& path = cat.path(p);
            for (int l = 0; l < L; ++l) {
                Row r;
                r.term(1.0, dt(s, p, l));
                for (ServerId x : path.servers)
                    for (int v = 0; v < V; ++v) r.term(-1.0, dl(s, v, x, l));
                r.term(-1.0, dw(s));
                w.constraint("c_dt_s" + std::to_string(s) + "_p" + std::to_string(p) + "_l" +
                                 std::to_string(l),
                             r, "=", path.delay_s);

                double worst = path.delay_s + inst.downtime_per_migration_s * prior_count;
                for (int v = 0; v < V; ++v) worst += sfc.vnfs[v].d_pro_max_s;
                const double big_m = std::max(0.0, worst - sfc.max_delay_s);
                Row sla;
                sla.term(1.0, dt(s, p, l));
                sla.term(big_m, zd(s, p, l));
                w.constraint("c_sla_s" + std::to_string(s) + "_p" + std::to_string(p) + "_l" +
                                 std::to_string(l),
                             sla, "<=", sfc.max_delay_s + big_m);
            }
        }
    }

    std::ostringstream out;
    out << "\\ VNF placement MILP (two-phase migration/replication model)\n";
    out << "Minimize\n obj:" << (obj.str().empty() ? " + 0 x_zero" : obj.str()) << "\n";
    out << "Subject To\n" << w.body.str();
    out << "Bounds\n";
    for (const auto& v : w.bounded) out << " " << v << " <= 1\n";
    out << "Binaries\n";
    std::sort(w.binaries.begin(), w.binaries.end());
    w.binaries.erase(std::unique(w.binaries.begin(), w.binaries.end()), w.binaries.end());
    for (const auto& v : w.binaries) out << " " << v << "\n";
    out << "End\n";
    return out.str();
}

} // namespace vnfopt
