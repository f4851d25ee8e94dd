#include "mdvrp/pruning.hpp"

#include <algorithm>
#include <cmath>

#include "mdvrp/decompose.hpp"  // CertificationError

namespace mdvrp {

namespace {

// Undirected adjacency of the pivot node and the given subtrees, sorted.
std::map<int, std::vector<int>> bundle_adjacency(const RootedTree& tree, int u,
                                                 const std::vector<int>& subtree_roots) {
  std::map<int, std::vector<int>> adj;
  for (int c : subtree_roots) {
    adj[u].push_back(c);
    adj[c].push_back(u);
    for (int x : tree.subtree(c)) {
      if (x == c) continue;
      const int p = tree.parent.at(x);
      adj[x].push_back(p);
      adj[p].push_back(x);
    }
  }
  for (auto& [x, list] : adj) std::sort(list.begin(), list.end());
  return adj;
}

// First-visit order of a depth-first closed walk from `start`, keeping only
// nodes in `keep`.
std::vector<int> euler_first_visits(const std::map<int, std::vector<int>>& adj,
                                    int start, const std::set<int>& keep) {
  std::vector<int> order;
  std::set<int> seen;
  auto visit = [&](auto&& self, int x, int from) -> void {
    if (!seen.insert(x).second) return;
    if (keep.count(x)) order.push_back(x);
    auto it = adj.find(x);
    if (it == adj.end()) return;
    for (int y : it->second)
      if (y != from) self(self, y, x);
  };
  visit(visit, start, -1);
  return order;
}

// Cheapest depot connection into the client set; ties towards the smaller
// depot, then the smaller client.
std::pair<int, int> cheapest_depot_edge(const Instance& inst,
                                        const std::vector<int>& clients) {
  int best_r = -1, best_w = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int r = inst.depot_begin(); r < inst.depot_end(); ++r)
    for (int w : clients)
      if (inst.c(w, r) < best) {
        best = inst.c(w, r);
        best_r = r;
        best_w = w;
      }
  return {best_r, best_w};
}

double subtree_edge_cost(const RootedTree& tree, int c) {
  double s = tree.edge_cost.at(c);  // parent edge to the pivot
  for (int x : tree.subtree(c))
    if (x != c) s += tree.edge_cost.at(x);
  return s;
}

bool leq_with_rel_tol(double lhs, double rhs) {
  return lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs));
}

}  // namespace

std::vector<SubtreeGroup> group_subtrees(const Instance& inst,
                                         const RootedTree& tree, int u, int k) {
  std::vector<SubtreeGroup> groups;
  const auto ch = tree.children();
  auto it = ch.find(u);
  if (it == ch.end()) return groups;
  for (int c : it->second) {
    SubtreeGroup g;
    g.subtree_roots = {c};
    g.cost = subtree_edge_cost(tree, c);
    for (int x : tree.subtree(c))
      if (tree.uncovered.count(x)) g.uncovered.push_back(x);
    if (static_cast<int>(g.uncovered.size()) > k)
      throw CertificationError("child subtree exceeds capacity at the pivot node");
    groups.push_back(std::move(g));
  }
  // Merge the first feasible pair until no pair fits.
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < groups.size() && !merged; ++i)
      for (std::size_t j = i + 1; j < groups.size() && !merged; ++j) {
        if (static_cast<int>(groups[i].uncovered.size() + groups[j].uncovered.size()) > k)
          continue;
        groups[i].subtree_roots.insert(groups[i].subtree_roots.end(),
                                       groups[j].subtree_roots.begin(),
                                       groups[j].subtree_roots.end());
        groups[i].cost += groups[j].cost;
        groups[i].uncovered.insert(groups[i].uncovered.end(),
                                   groups[j].uncovered.begin(),
                                   groups[j].uncovered.end());
        groups.erase(groups.begin() + j);
        merged = true;
      }
  }
  for (SubtreeGroup& g : groups) {
    std::sort(g.subtree_roots.begin(), g.subtree_roots.end());
    std::sort(g.uncovered.begin(), g.uncovered.end());
  }
  (void)inst;
  return groups;
}

Tour tour_of_group(const Instance& inst, const RootedTree& tree, int u,
                   const SubtreeGroup& g) {
  if (g.uncovered.empty()) throw std::invalid_argument("group covers no client");
  auto [r, w] = cheapest_depot_edge(inst, g.uncovered);
  const auto adj = bundle_adjacency(tree, u, g.subtree_roots);
  Tour t;
  t.depot = r;
  t.clients = euler_first_visits(adj, w, {g.uncovered.begin(), g.uncovered.end()});
  return t;
}

std::pair<Tour, std::vector<int>> tour_of_two_groups(const Instance& inst,
                                                     const RootedTree& tree,
                                                     int u, const SubtreeGroup& g,
                                                     const SubtreeGroup& g2, int k) {
  const int need = k - static_cast<int>(g.uncovered.size());
  if (static_cast<int>(g.uncovered.size() + g2.uncovered.size()) <= k)
    throw std::invalid_argument("groups are mergeable");
  // A: the clients of the second group with the largest radial contribution.
  std::vector<int> pool = g2.uncovered;
  std::sort(pool.begin(), pool.end(), [&](int a, int b) {
    if (inst.ell(a) != inst.ell(b)) return inst.ell(a) > inst.ell(b);
    return a < b;
  });
  std::vector<int> a_set(pool.begin(), pool.begin() + std::max(0, need));

  std::vector<int> visit = g.uncovered;
  visit.insert(visit.end(), a_set.begin(), a_set.end());
  auto [r, w] = cheapest_depot_edge(inst, visit);

  std::vector<int> roots = g.subtree_roots;
  roots.insert(roots.end(), g2.subtree_roots.begin(), g2.subtree_roots.end());
  const auto adj = bundle_adjacency(tree, u, roots);
  Tour t;
  t.depot = r;
  t.clients = euler_first_visits(adj, w, {visit.begin(), visit.end()});
  std::sort(a_set.begin(), a_set.end());
  return {std::move(t), std::move(a_set)};
}

PruneResult prune_tree(const Instance& inst, RootedTree& tree, int k,
                       double beta, double delta) {
  PruneResult result;
  const double ell_before = [&] {
    double s = 0;
    for (int v : tree.uncovered) s += inst.ell(v);
    return s;
  }();
  const double cost_before = tree.cost();
  const double inv_beta = 1.0 / beta;

  while (true) {
    // Deepest node whose subtree holds more than k uncovered clients; the
    // root when none does.  Ties towards the smaller id.
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
    int best_depth = -1;
    for (const auto& [x, d] : depth) {
      if (tree.uncovered_in_subtree(x) <= k) continue;
      if (d > best_depth || (d == best_depth && x < u)) {
        u = x;
        best_depth = d;
      }
    }
    if (best_depth < 0) u = tree.root;

    const auto groups = group_subtrees(inst, tree, u, k);
    bool emitted = false;

    for (const SubtreeGroup& g : groups) {
      if (g.uncovered.empty()) continue;
      Tour t = tour_of_group(inst, tree, u, g);
      const double bound = 2.5 * g.cost + inv_beta * inst.ell_sum(g.uncovered);
      if (!leq_with_rel_tol(tour_cost(inst, t), bound)) continue;
      result.tours_cost += tour_cost(inst, t);
      result.tours.push_back(std::move(t));
      result.removed_edge_cost += g.cost;
      result.ell_covered += inst.ell_sum(g.uncovered);
      result.covered.insert(result.covered.end(), g.uncovered.begin(), g.uncovered.end());
      for (int x : g.uncovered) tree.uncovered.erase(x);
      for (int c : g.subtree_roots) tree.erase_subtree(c);
      emitted = true;
      break;
    }

    if (!emitted && groups.size() >= 2) {
      // Pairs ordered by descending first-group cost, then ascending indices.
      std::vector<std::size_t> order(groups.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (groups[a].cost != groups[b].cost) return groups[a].cost > groups[b].cost;
        return a < b;
      });
      for (std::size_t oi = 0; oi < order.size() && !emitted; ++oi) {
        const std::size_t i = order[oi];
        if (groups[i].uncovered.empty()) continue;
        for (std::size_t j = 0; j < groups.size() && !emitted; ++j) {
          if (j == i) continue;
          if (static_cast<int>(groups[i].uncovered.size() +
                               groups[j].uncovered.size()) <= k)
            continue;
          auto [t, a_set] = tour_of_two_groups(inst, tree, u, groups[i], groups[j], k);
          double ell_new = inst.ell_sum(groups[i].uncovered) + inst.ell_sum(a_set);
          const double bound = 2.5 * groups[i].cost + inv_beta * ell_new;
          if (!leq_with_rel_tol(tour_cost(inst, t), bound)) continue;
          result.tours_cost += tour_cost(inst, t);
          result.tours.push_back(std::move(t));
          result.removed_edge_cost += groups[i].cost;
          result.ell_covered += ell_new;
          result.covered.insert(result.covered.end(), groups[i].uncovered.begin(),
                                groups[i].uncovered.end());
          result.covered.insert(result.covered.end(), a_set.begin(), a_set.end());
          for (int x : groups[i].uncovered) tree.uncovered.erase(x);
          for (int x : a_set) tree.uncovered.erase(x);  // clients of A stay in the tree
          for (int c : groups[i].subtree_roots) tree.erase_subtree(c);
          emitted = true;
        }
      }
    }

    if (!emitted) {
      // When the pivot sits strictly below the root, its subtree holds more
      // than k uncovered clients and one of the two cases must fire.
      if (u != tree.root)
        throw CertificationError("pruning pivot below the root emitted no tour");
      // The groups of the final iteration satisfy the residual bounds.
      for (const SubtreeGroup& g : groups) {
        if (g.uncovered.empty()) continue;
        if (static_cast<double>(g.uncovered.size()) >= beta * k + 1e-9)
          throw CertificationError("final group exceeds beta * k uncovered clients");
        if (static_cast<double>(g.uncovered.size()) > k / 2.0) {
          const double lhs = inst.ell_sum(g.uncovered);
          if (lhs + 1e-9 * std::max(1.0, delta * g.cost) < delta * g.cost)
            throw CertificationError("final group misses the density bound");
        }
      }
      break;
    }
  }

  // Residual postconditions.
  const int residual_uncovered = static_cast<int>(tree.uncovered.size());
  if (static_cast<double>(residual_uncovered) > beta * k + 1e-9)
    throw CertificationError("residual tree keeps more than beta * k uncovered clients");
  if (residual_uncovered > k / 2.0) {
    double ell_resid = 0;
    for (int v : tree.uncovered) ell_resid += inst.ell(v);
    const double rhs = delta * tree.cost();
    if (ell_resid + 1e-9 * std::max(1.0, rhs) < rhs)
      throw CertificationError("residual tree misses the density bound");
  }
  // Ledger: emitted tours against removed edges and covered radial mass.
  const double removed = cost_before - tree.cost();
  const double ell_removed = ell_before - [&] {
    double s = 0;
    for (int v : tree.uncovered) s += inst.ell(v);
    return s;
  }();
  const double budget = 2.5 * removed + inv_beta * ell_removed;
  if (result.tours_cost > budget + 1e-6 * std::max(1.0, budget))
    throw CertificationError("pruning ledger inequality violated");

  std::sort(result.covered.begin(), result.covered.end());
  return result;
}

}  // namespace mdvrp
