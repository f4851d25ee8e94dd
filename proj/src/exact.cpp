#include "mdvrp/exact.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>

namespace mdvrp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest Hamiltonian r -> ... -> last over all members of `group`,
// reporting the best visit order.  Classic bitmask DP.
struct GroupDp {
  const Instance& inst;
  const std::vector<int>& group;
  int s;
  std::vector<std::vector<double>> dp;     // dp[mask][i]: r -> visits mask, ends at i
  std::vector<std::vector<int>> from;

  GroupDp(const Instance& i, const std::vector<int>& g, int depot)
      : inst(i), group(g), s(static_cast<int>(g.size())) {
    dp.assign(1u << s, std::vector<double>(s, kInf));
    from.assign(1u << s, std::vector<int>(s, -1));
    for (int i0 = 0; i0 < s; ++i0) dp[1u << i0][i0] = inst.c(depot, group[i0]);
    for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
      for (int i0 = 0; i0 < s; ++i0) {
        if (!(mask & (1u << i0)) || dp[mask][i0] == kInf) continue;
        for (int j = 0; j < s; ++j) {
          if (mask & (1u << j)) continue;
          const std::uint32_t nm = mask | (1u << j);
          const double cand = dp[mask][i0] + inst.c(group[i0], group[j]);
          if (cand < dp[nm][j]) {
            dp[nm][j] = cand;
            from[nm][j] = i0;
          }
        }
      }
    }
  }

  // Closes the cycle back at the depot.
  std::pair<double, std::vector<int>> best_cycle(int depot) const {
    const std::uint32_t full = (1u << s) - 1;
    double best = kInf;
    int last = -1;
    for (int i0 = 0; i0 < s; ++i0) {
      const double cand = dp[full][i0] + inst.c(group[i0], depot);
      if (cand < best) {
        best = cand;
        last = i0;
      }
    }
    std::vector<int> order;
    std::uint32_t mask = full;
    int cur = last;
    while (cur != -1) {
      order.push_back(group[cur]);
      const int prev = from[mask][cur];
      mask &= ~(1u << cur);
      cur = prev;
    }
    std::reverse(order.begin(), order.end());
    return {best, order};
  }
};

}  // namespace

Tour optimal_tour_for_group(const Instance& inst, const std::vector<int>& group) {
  if (group.empty() || group.size() > 12)
    throw std::invalid_argument("group size out of range for subset DP");
  double best = kInf;
  Tour tour;
  for (int r = inst.depot_begin(); r < inst.depot_end(); ++r) {
    GroupDp dp(inst, group, r);
    auto [cost, order] = dp.best_cycle(r);
    if (cost < best) {
      best = cost;
      tour.depot = r;
      tour.clients = order;
    }
  }
  return tour;
}

Solution brute_force_opt(const Instance& inst) {
  const int n = inst.n_clients;
  if (n > 10) throw std::invalid_argument("instance too large for brute force");
  const std::uint32_t full = (1u << n) - 1;

  // Cheapest tour per feasible group, indexed by bitmask.
  std::vector<double> group_cost(full + 1, kInf);
  std::vector<Tour> group_tour(full + 1);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) > inst.k) continue;
    std::vector<int> group;
    for (int v = 0; v < n; ++v)
      if (mask & (1u << v)) group.push_back(v);
    Tour t = optimal_tour_for_group(inst, group);
    group_cost[mask] = tour_cost(inst, t);
    group_tour[mask] = std::move(t);
  }

  std::vector<double> f(full + 1, kInf);
  std::vector<std::uint32_t> choice(full + 1, 0);
  f[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    // Fix the lowest set bit inside the chosen group; each partition is then
    // enumerated once and ties resolve to the smallest group bitmask.
    const std::uint32_t lowbit = mask & (~mask + 1);
    for (std::uint32_t sub = mask; sub; sub = (sub - 1) & mask) {
      if (!(sub & lowbit)) continue;
      if (group_cost[sub] == kInf) continue;
      const double cand = f[mask ^ sub] + group_cost[sub];
      if (cand < f[mask] - 1e-15 ||
          (std::abs(cand - f[mask]) <= 1e-15 && sub < choice[mask])) {
        f[mask] = cand;
        choice[mask] = sub;
      }
    }
  }

  Solution sol;
  std::uint32_t mask = full;
  while (mask) {
    sol.tours.push_back(group_tour[choice[mask]]);
    mask ^= choice[mask];
  }
  std::reverse(sol.tours.begin(), sol.tours.end());
  return sol;
}

}  // namespace mdvrp
