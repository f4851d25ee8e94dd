#include "mdvrp/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "mdvrp/decompose.hpp"  // CertificationError
#include "mdvrp/forest.hpp"
#include "mdvrp/pruning.hpp"
#include "mdvrp/sampling.hpp"

namespace mdvrp {

namespace {

// Doubled-tree tour of a whole residual tree, rooted at its own depot.
Tour doubled_tree_tour(const RootedTree& tree) {
  Tour t;
  t.depot = tree.root;
  const auto ch = tree.children();
  std::vector<int> order;
  auto visit = [&](auto&& self, int u) -> void {
    if (u != tree.root) order.push_back(u);
    auto it = ch.find(u);
    if (it == ch.end()) return;
    for (int c : it->second) self(self, c);
  };
  visit(visit, tree.root);
  t.clients = std::move(order);
  return t;
}

}  // namespace

Solution hkm_tree_splitting(const Instance& inst, BaselineLedger* ledger) {
  std::vector<int> depots, clients;
  for (int r = inst.depot_begin(); r < inst.depot_end(); ++r) depots.push_back(r);
  for (int v = 0; v < inst.n_clients; ++v) clients.push_back(v);
  RootedForest forest = min_rooted_forest(inst, depots, clients);
  const double forest_cost = forest.cost();
  const int k = inst.k;

  Solution sol;
  for (RootedTree& tree : forest.trees) {
    // Every member still counts; coverage marks are not used here.
    while (static_cast<int>(tree.members.size()) > k) {
      // Deepest node whose subtree exceeds the capacity.
      std::map<int, int> depth;
      depth[tree.root] = 0;
      const auto ch = tree.children();
      std::vector<int> stack = {tree.root};
      while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        auto it = ch.find(x);
        if (it == ch.end()) continue;
        for (int c : it->second) {
          depth[c] = depth[x] + 1;
          stack.push_back(c);
        }
      }
      int u = tree.root;
      int best_depth = 0;
      for (const auto& [x, d] : depth) {
        const int count = static_cast<int>(tree.subtree(x).size()) -
                          (x == tree.root ? 1 : 0);
        if (x == tree.root || count > k) {
          if (d > best_depth || (d == best_depth && x < u)) {
            u = x;
            best_depth = d;
          }
        }
      }

      auto groups = group_subtrees(inst, tree, u, k);
      bool split_any = false;
      for (const SubtreeGroup& g : groups) {
        if (2 * static_cast<int>(g.uncovered.size()) < k) continue;
        sol.tours.push_back(tour_of_group(inst, tree, u, g));
        split_any = true;
      }
      if (!split_any)
        throw CertificationError("no group of at least k/2 clients at the pivot");
      for (const SubtreeGroup& g : groups) {
        if (2 * static_cast<int>(g.uncovered.size()) < k) continue;
        for (int c : g.subtree_roots) tree.erase_subtree(c);
      }
    }
    if (!tree.members.empty()) sol.tours.push_back(doubled_tree_tour(tree));
  }

  const double lb = radial_lb(inst);
  const double total = solution_cost(inst, sol);
  const double budget = 2 * forest_cost + 2 * lb;
  if (total > budget + 1e-6 * std::max(1.0, budget))
    throw CertificationError("tree splitting exceeded its doubled budget");
  if (ledger) {
    ledger->forest_cost = forest_cost;
    ledger->lb = lb;
    ledger->total = total;
  }
  return sol;
}

Solution lsl_tour_splitting(const Instance& inst, BaselineLedger* ledger) {
  const int n = inst.n_clients;
  const int k = inst.k;
  // Contracted metric: node n is the merged depot.
  auto dist = [&](int a, int b) {
    if (a == b) return 0.0;
    if (a == n) return inst.depot_distance(b);
    if (b == n) return inst.depot_distance(a);
    return std::min(inst.c(a, b), inst.depot_distance(a) + inst.depot_distance(b));
  };

  // Spanning tree of the contracted metric (Prim from the merged depot).
  std::vector<int> par(n, n);
  std::vector<double> key(n);
  std::vector<char> done(n, 0);
  for (int v = 0; v < n; ++v) key[v] = dist(n, v);
  std::vector<std::vector<int>> kids(n + 1);
  double mst_cost = 0;
  for (int it = 0; it < n; ++it) {
    int pick = -1;
    for (int v = 0; v < n; ++v)
      if (!done[v] && (pick < 0 || key[v] < key[pick] ||
                       (key[v] == key[pick] && v < pick)))
        pick = v;
    done[pick] = 1;
    mst_cost += key[pick];
    kids[par[pick]].push_back(pick);
    for (int v = 0; v < n; ++v)
      if (!done[v] && dist(pick, v) < key[v]) {
        key[v] = dist(pick, v);
        par[v] = pick;
      }
  }
  for (auto& list : kids) std::sort(list.begin(), list.end());

  // Doubled-tree TSP order of the contracted graph.
  std::vector<int> order;
  auto visit = [&](auto&& self, int u) -> void {
    if (u != n) order.push_back(u);
    for (int c : kids[u]) self(self, c);
  };
  visit(visit, n);

  // Lift to depot-rooted paths: cut wherever the contracted edge routes
  // through the merged depot.
  std::vector<RootedPath> paths;
  RootedPath cur;
  auto flush = [&](int next_first) {
    if (!cur.clients.empty()) paths.push_back(std::move(cur));
    cur = RootedPath{};
    if (next_first >= 0) {
      cur.depot = inst.nearest_depot(next_first);
      cur.clients.push_back(next_first);
    }
  };
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int v = order[i];
    if (i == 0) {
      flush(v);
      continue;
    }
    const int prev = order[i - 1];
    const bool via_depot =
        inst.depot_distance(prev) + inst.depot_distance(v) < inst.c(prev, v);
    if (via_depot)
      flush(v);
    else
      cur.clients.push_back(v);
  }
  flush(-1);

  double walk_cost = 0;
  for (const RootedPath& p : paths) walk_cost += path_cost(inst, p);
  if (walk_cost > 2 * mst_cost + 1e-6 * std::max(1.0, mst_cost))
    throw CertificationError("lifted walks exceed the doubled spanning tree");

  // Best-offset split per path.
  Solution sol;
  double total = 0;
  for (const RootedPath& p : paths) {
    const int a = static_cast<int>(p.clients.size());
    double best = std::numeric_limits<double>::infinity();
    std::vector<Tour> best_tours;
    for (int tau = 1; tau <= k; ++tau) {
      std::vector<Tour> tours;
      double cost = 0;
      if (tau > 1) {
        Tour lead;
        lead.depot = p.depot;
        for (int i = 0; i < std::min(tau - 1, a); ++i)
          lead.clients.push_back(p.clients[i]);
        if (!lead.clients.empty()) {
          cost += tour_cost(inst, lead);
          tours.push_back(std::move(lead));
        }
      }
      for (int start = tau - 1; start < a; start += k) {
        Tour t;
        t.depot = inst.nearest_depot(p.clients[start]);
        for (int i = start; i < std::min(start + k, a); ++i)
          t.clients.push_back(p.clients[i]);
        cost += tour_cost(inst, t);
        tours.push_back(std::move(t));
      }
      if (cost < best - 1e-12) {
        best = cost;
        best_tours = std::move(tours);
      }
    }
    total += best;
    for (Tour& t : best_tours) sol.tours.push_back(std::move(t));
  }

  const double lb = radial_lb(inst);
  const double budget = 2 * walk_cost + lb;
  if (total > budget + 1e-6 * std::max(1.0, budget))
    throw CertificationError("tour splitting exceeded its doubled budget");
  if (ledger) {
    ledger->walk_cost = walk_cost;
    ledger->lb = lb;
    ledger->total = total;
  }
  return sol;
}

}  // namespace mdvrp
