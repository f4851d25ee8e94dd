// Brute-force optimum for tiny instances.  Ground truth for LP-bound and
// approximation-ratio tests.
#ifndef MDVRP_EXACT_HPP
#define MDVRP_EXACT_HPP

#include "mdvrp/instance.hpp"

namespace mdvrp {

// Cheapest tour through a client group: minimum over depots of the shortest
// Hamiltonian cycle anchored at the depot, by subset DP over the group.
// Requires 1 <= |group| <= 12.
Tour optimal_tour_for_group(const Instance& inst, const std::vector<int>& group);

// Exact optimum via DP over client subsets.  Requires n_clients <= 10.
// Deterministic: ties broken towards the lexicographically smallest group
// bitmask.
Solution brute_force_opt(const Instance& inst);

}  // namespace mdvrp

#endif
