// End-to-end solvers.  The rounding pipeline is split into a deterministic
// plan (relaxation + branching decompositions) and a seeded run (sampling,
// grafting forest, pruning, partition), so many seeds can share one plan.
#ifndef MDVRP_SOLVE_HPP
#define MDVRP_SOLVE_HPP

#include <cstdint>

#include "mdvrp/certify.hpp"
#include "mdvrp/instance.hpp"
#include "mdvrp/lp.hpp"
#include "mdvrp/sampling.hpp"

namespace mdvrp {

enum class Algo { LpRound, TreeSplit, TourSplit, Brute };

Algo algo_from_name(const std::string& name);  // throws on unknown name
std::string algo_name(Algo a);

struct PipelinePlan {
  double gamma = kGamma;
  double opt_lp = 0;
  double delta = 0;
  std::vector<BlockDecomposition> decomps;  // global node ids
};

// Requires a preprocessed instance with k >= 3.
PipelinePlan plan_pipeline(const Instance& inst, double gamma = kGamma,
                           LpOptions lp_opts = {});

struct PipelineResult {
  Solution solution;
  RunTrace trace;
};

PipelineResult run_pipeline(const Instance& inst, const PipelinePlan& plan,
                            std::uint64_t seed);

struct SolveOptions {
  std::uint64_t seed = 1;
  double gamma = kGamma;
  LpOptions lp = {};
};

// Front door used by the CLI: preprocesses, dispatches on the algorithm and
// the capacity (k = 1 is served by singletons, k = 2 by the exact solver on
// small instances) and lifts the solution back to the original instance.
Solution solve_instance(const Instance& inst, Algo algo, const SolveOptions& opts,
                        RunTrace* trace = nullptr);

}  // namespace mdvrp

#endif
