// Final stage: each sampled path is merged with its residual trees via a
// trunk-first DFS ordering, the combined sequence is split at every k-th
// position for every offset, and the cheapest offset wins.  Split positions
// inside a tall tree cut the surrounding block at the tree's base so that no
// tree edge is doubled more than twice.
#ifndef MDVRP_PARTITION_HPP
#define MDVRP_PARTITION_HPP

#include <optional>
#include <vector>

#include "mdvrp/constants.hpp"
#include "mdvrp/forest.hpp"
#include "mdvrp/sampling.hpp"

namespace mdvrp {

// Highest-cost root-to-leaf path of the tree.
double trunk_cost(const RootedTree& tree);
std::vector<int> trunk_nodes(const RootedTree& tree);

// Short trees double only their trunk on a split, tall trees double the
// rest; the threshold trades the trunk against the uncovered radial mass.
bool tree_is_short(const Instance& inst, const RootedTree& tree, int k);

// Post-order DFS of the uncovered clients, descending the trunk first,
// remaining children in ascending id order.  The root is not emitted.
std::vector<int> tree_dfs_order(const RootedTree& tree);

struct OrderedLine {
  int depot = -1;
  std::vector<int> seq;       // seq[0] = depot, then path clients with their
                              // trees' uncovered members spliced in
  std::vector<int> tree_of;   // per position: tree index or -1
  struct TreeRef {
    const RootedTree* tree = nullptr;
    int base_pos = 0;  // position of the tree's root within seq
    bool is_short = true;
    int n_uncovered = 0;
  };
  std::vector<TreeRef> trees;
  // Combined path-plus-trees tree over node ids, rooted at the depot.
  std::map<int, int> parent;
  std::map<int, double> parent_cost;
};

OrderedLine build_line(const Instance& inst, const RootedPath& path,
                       const std::vector<const RootedTree*>& trees, int k);

struct Subsequence {
  int start = 0, end = 0;   // inclusive positions in the line
  int connector = 0;        // position of the split node (or 0 for the depot)
  int appended = -1;        // extra split position carried by a suffix piece
};

// Blocks of length k anchored at offset tau in {1..k}; a block whose right
// boundary falls inside a tall tree is cut at the tree's base.
std::vector<Subsequence> split_with_offset(const OrderedLine& line, int tau, int k);

// Doubled minimal subtree spanning the subsequence plus a doubled depot
// connection at the split node, shortcut to the covered clients.
std::optional<Tour> subsequence_to_tour(const Instance& inst,
                                        const OrderedLine& line,
                                        const Subsequence& seg);

struct PartitionLedger {
  double path_cost = 0;           // c(P)
  double trees_cost = 0;          // residual tree edges rooted on this path
  double ell_path_clients = 0;    // radial mass of the path clients
  double ell_tree_uncovered = 0;  // radial mass of uncovered tree clients
  std::vector<double> cost_by_offset;
  int best_offset = 1;
  double best_cost = 0;
  std::vector<Tour> tours;        // tours of the best offset
};

// Evaluates every offset, keeps the cheapest, and verifies the structural
// and cost certificates of the construction.  Throws CertificationError.
PartitionLedger partition_path(const Instance& inst, const RootedPath& path,
                               const std::vector<const RootedTree*>& trees,
                               int k, double beta = kPruneBeta);

}  // namespace mdvrp

#endif
