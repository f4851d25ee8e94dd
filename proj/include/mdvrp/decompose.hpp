// Decomposition of a rooted preflow into weighted branchings.
//
// Input flows are snapped to a common-denominator integer grid, so every
// certificate below is checked in exact integer arithmetic:
//   - weights sum to the budget K,
//   - no edge carries more branching weight than its flow value,
//   - every node is covered by at least min(K, lambda_v) weight, where
//     lambda_v is the root->v min-cut value of the flow.
// The construction extracts one branching at a time: a covering branching is
// grown under a connectivity invariant and then peeled off with the largest
// weight that keeps the remaining requirements routable.  Inputs are
// gcd-normalized first, which makes the output exactly equivariant under
// scaling of (f, K).
#ifndef MDVRP_DECOMPOSE_HPP
#define MDVRP_DECOMPOSE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace mdvrp {

class CertificationError : public std::runtime_error {
 public:
  explicit CertificationError(const std::string& what)
      : std::runtime_error(what) {}
};

struct Branching {
  int root = 0;
  std::vector<std::pair<int, int>> edges;  // out-tree arcs, sorted

  std::vector<int> covered_nodes() const;  // heads, ascending
  bool contains(int node) const;
};

struct WeightedBranching {
  Branching branching;
  std::int64_t weight_num = 0;  // exact weight over BranchingSet::denom
};

struct BranchingSet {
  int root = 0;
  std::int64_t denom = 1;
  std::int64_t budget_num = 0;              // K on the grid
  std::vector<std::int64_t> lambda;         // per node, grid units
  std::vector<std::int64_t> requirement;    // min(K, lambda_v)
  std::vector<WeightedBranching> items;

  double weight(std::size_t i) const {
    return static_cast<double>(items[i].weight_num) / static_cast<double>(denom);
  }
  double budget() const {
    return static_cast<double>(budget_num) / static_cast<double>(denom);
  }
};

using GridArc = std::tuple<int, int, std::int64_t>;  // tail, head, capacity

// Root->v min-cut values under integer capacities, for all nodes.
std::vector<std::int64_t> connectivity_profile(int num_nodes, int root,
                                               const std::vector<GridArc>& arcs);

// Tolerance check of the preflow property in(v) >= out(v) for v != root.
bool is_preflow(int num_nodes, int root,
                const std::vector<std::tuple<int, int, double>>& arcs,
                double tol);

// Snap double-valued arcs to the grid, dropping arcs that round to zero.
std::vector<GridArc> rationalize_arcs(
    const std::vector<std::tuple<int, int, double>>& arcs, std::int64_t denom);

// The decomposition.  Throws CertificationError when any produced set fails
// its exact re-verification; never returns an uncertified result.
BranchingSet decompose_preflow(int num_nodes, int root,
                               const std::vector<GridArc>& arcs,
                               std::int64_t budget_num, std::int64_t denom);

}  // namespace mdvrp

#endif
