// Tree pruning: splice capacity-respecting tours off a forest tree until the
// residual is small.  Every emitted tour's cost is charged to 2.5 times the
// removed edges plus 1/beta times the radial contribution of the clients it
// covers; the residual tree satisfies |U(T')| <= beta*k and, when more than
// k/2 clients remain, ell(U(T')) >= delta * c(T').  Violations of these
// postconditions abort the run: they are theorems, so a failure is a bug.
#ifndef MDVRP_PRUNING_HPP
#define MDVRP_PRUNING_HPP

#include <vector>

#include "mdvrp/constants.hpp"
#include "mdvrp/forest.hpp"

namespace mdvrp {

// A bundle of sibling subtrees under the pivot node u.
struct SubtreeGroup {
  std::vector<int> subtree_roots;  // children of u, ascending
  double cost = 0;                 // subtree edges plus their parent edges
  std::vector<int> uncovered;      // ascending
};

// Greedy merge: scan (i, j) pairs in ascending index order, merge the first
// pair whose uncovered counts fit within k, repeat.  Afterwards no two
// groups are mergeable.
std::vector<SubtreeGroup> group_subtrees(const Instance& inst,
                                         const RootedTree& tree, int u, int k);

// Doubled group tree plus the cheapest doubled depot connection, shortcut to
// the uncovered clients.
Tour tour_of_group(const Instance& inst, const RootedTree& tree, int u,
                   const SubtreeGroup& g);

// Covers all of U(g) plus the k-|U(g)| clients of U(g2) with the largest
// radial contribution (set A, smaller id on ties).  Requires the pair to be
// unmergeable.  Returns the tour and A.
std::pair<Tour, std::vector<int>> tour_of_two_groups(const Instance& inst,
                                                     const RootedTree& tree,
                                                     int u, const SubtreeGroup& g,
                                                     const SubtreeGroup& g2, int k);

struct PruneResult {
  std::vector<Tour> tours;
  double tours_cost = 0;
  double removed_edge_cost = 0;     // c(T) - c(T')
  double ell_covered = 0;           // radial mass of newly covered clients
  std::vector<int> covered;         // newly covered clients
};

// Mutates `tree` into the residual tree.  Postconditions and the per-tree
// cost ledger are asserted; throws CertificationError when violated.
PruneResult prune_tree(const Instance& inst, RootedTree& tree, int k,
                       double beta = kPruneBeta, double delta = kResidualDelta);

}  // namespace mdvrp

#endif
