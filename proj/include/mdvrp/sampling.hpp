// Preflow-rounding stage: branchings become depot-rooted paths, get sampled
// independently with their decomposition weights, and overlapping client
// visits are removed.
#ifndef MDVRP_SAMPLING_HPP
#define MDVRP_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include "mdvrp/decompose.hpp"
#include "mdvrp/instance.hpp"
#include "mdvrp/rng.hpp"

namespace mdvrp {

struct RootedPath {
  int depot = -1;
  std::vector<int> clients;  // distinct, nonempty once finalized
};

double path_cost(const Instance& inst, const RootedPath& p);

// Decomposition of one (depot, far client) block, already mapped to global
// node ids.
struct BlockDecomposition {
  int r = -1;
  int v = -1;
  std::vector<Branching> branchings;   // global node ids
  std::vector<double> weights;         // sampling probabilities, <= 1
};

// Doubles the non-path edges of the branching and shortcuts the walk; the
// result starts at r, visits each branching client once and ends at v.
RootedPath branching_to_path(const Instance& inst, const Branching& b, int r, int v);

struct SamplingOutcome {
  std::vector<RootedPath> paths;            // after deduplication
  std::vector<int> uncovered;               // clients on no path, ascending
  std::vector<std::vector<char>> sampled;   // per block, per branching
  double raw_cost = 0;                      // before deduplication
  double cost = 0;
};

// Independent coin per branching, single rng stream, block-major order.
// Throws when a weight exceeds one.
std::vector<RootedPath> sample_paths(const Instance& inst,
                                     const std::vector<BlockDecomposition>& decomps,
                                     Rng& rng,
                                     std::vector<std::vector<char>>* sampled = nullptr);

// Removes repeated client visits: clients in ascending order, the surviving
// occurrence is the one on the lexicographically smallest (depot, path index)
// path.  Empty paths are dropped.
SamplingOutcome deduplicate(const Instance& inst, std::vector<RootedPath> raw,
                            const std::vector<std::vector<char>>& sampled);

}  // namespace mdvrp

#endif
