// Rooted trees and the cheapest forest rooted at a node set, used to graft
// uncovered clients into the sampled paths.
#ifndef MDVRP_FOREST_HPP
#define MDVRP_FOREST_HPP

#include <map>
#include <set>
#include <vector>

#include "mdvrp/instance.hpp"

namespace mdvrp {

struct RootedTree {
  int root = -1;                    // depot or path client (never removed)
  std::vector<int> members;         // non-root nodes, ascending
  std::map<int, int> parent;        // member -> parent (member or root)
  std::map<int, double> edge_cost;  // member -> cost of its parent edge
  std::set<int> uncovered;          // subset of members

  double cost() const;
  std::map<int, std::vector<int>> children() const;          // sorted lists
  std::vector<int> subtree(int u) const;                     // includes u
  int uncovered_in_subtree(int u) const;
  void erase_subtree(int u);                                 // u != root
};

struct RootedForest {
  std::vector<RootedTree> trees;  // one per used root, ascending root id
  double cost() const;
  double ell_uncovered(const Instance& inst) const;
};

// Cheapest forest whose components each contain exactly one root: contract
// the roots into a single super node (remembering the best root per client)
// and run a spanning tree over {super} union uncovered.  Ties break towards
// the smaller endpoint id.
RootedForest min_rooted_forest(const Instance& inst, const std::vector<int>& roots,
                               const std::vector<int>& uncovered);

}  // namespace mdvrp

#endif
