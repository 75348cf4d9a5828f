#ifndef VNFOPT_SOLVERS_HPP
#define VNFOPT_SOLVERS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vnfopt/model.hpp"

namespace vnfopt {

enum class SolveStatus { Optimal, Heuristic, Infeasible };

const char* to_string(SolveStatus s);

// guard for the enumerative oracle; it refuses anything larger
struct ExactLimits {
    int max_demands = 3;      // total demands across SFCs
    int max_paths = 4;        // admissible paths per SFC
    int max_servers = 12;
    long node_budget = 50'000'000;
};

struct SolveRequest {
    const Instance* instance = nullptr;
    const PriorPlacement* prior = nullptr;            // phase 2 only
    const PlacementSolution* prior_solution = nullptr; // full phase-1 solution (greedy reuse rules)
    ObjectiveWeights weights;
    int phase = 1;
    std::uint64_t rng_seed = 0; // Random-Fit draws
    ExactLimits exact_limits;
};

struct SolveStats {
    long nodes_explored = 0;
    long placement_attempts = 0;
    double wall_s = 0.0;
};

struct SolveResult {
    PlacementSolution solution;
    MetricsReport metrics;
    SolveStatus status = SolveStatus::Infeasible;
    SolveStats stats;
    std::vector<std::string> notes; // infeasible demands, rollbacks, budget exhaustion
};

// Exhaustive branch-and-bound over (demand->path, (demand,VNF)->server)
// assignments with derived sync paths. Optimal within ExactLimits; throws
// std::invalid_argument when the instance exceeds them.
SolveResult solve_exact(const SolveRequest& req);

SolveResult solve_first_fit(const SolveRequest& req);
SolveResult solve_random_fit(const SolveRequest& req);
SolveResult solve_greedy(const SolveRequest& req);

// Full MILP in CPLEX LP text format; byte-deterministic for a given input.
std::string export_lp(const Instance& inst, const PriorPlacement* prior,
                      const ObjectiveWeights& weights);

// Weights per the single-objective experiments: main term 1, each secondary
// term 1/(2*(1+U)) with U an upper bound on that secondary count.
enum class WeightsMode { Joint, MinMigrations, MinReplications, MinCloud };
ObjectiveWeights make_weights(WeightsMode mode, const Instance& inst, const PriorPlacement* prior);

} // namespace vnfopt

#endif
