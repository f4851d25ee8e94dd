// Classical comparison algorithms: splitting a depot-rooted spanning forest,
// and splitting a TSP tour of the depot-contracted metric.
#ifndef MDVRP_BASELINES_HPP
#define MDVRP_BASELINES_HPP

#include "mdvrp/instance.hpp"

namespace mdvrp {

struct BaselineLedger {
  double forest_cost = 0;   // tree splitting: c(F) with roots = depots
  double walk_cost = 0;     // tour splitting: lifted TSP walk cost
  double lb = 0;
  double total = 0;
};

// Splits tours off a cheapest depot-rooted spanning forest; every split
// group holds at least k/2 clients and connects to its nearest depot; the
// residual trees are doubled at their own roots.  Total is at most
// 2 c(F) + 2 lb.
Solution hkm_tree_splitting(const Instance& inst, BaselineLedger* ledger = nullptr);

// Contracts the depots to one node, tours it with a doubled spanning tree,
// lifts the tour to depot-rooted paths and splits each path at the best
// offset; chosen clients connect to their nearest depot, the leading
// remainder doubles back to the path's start depot.
Solution lsl_tour_splitting(const Instance& inst, BaselineLedger* ledger = nullptr);

}  // namespace mdvrp

#endif
