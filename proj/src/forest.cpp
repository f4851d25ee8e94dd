#include "mdvrp/forest.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mdvrp {

double RootedTree::cost() const {
  double s = 0;
  for (const auto& [u, c] : edge_cost) s += c;
  return s;
}

std::map<int, std::vector<int>> RootedTree::children() const {
  std::map<int, std::vector<int>> ch;
  for (const auto& [u, p] : parent) ch[p].push_back(u);
  for (auto& [p, list] : ch) std::sort(list.begin(), list.end());
  return ch;
}

std::vector<int> RootedTree::subtree(int u) const {
  const auto ch = children();
  std::vector<int> out, queue = {u};
  while (!queue.empty()) {
    const int x = queue.back();
    queue.pop_back();
    out.push_back(x);
    auto it = ch.find(x);
    if (it != ch.end())
      for (int c : it->second) queue.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int RootedTree::uncovered_in_subtree(int u) const {
  int count = 0;
  for (int x : subtree(u))
    if (uncovered.count(x)) ++count;
  return count;
}

void RootedTree::erase_subtree(int u) {
  if (u == root) throw std::invalid_argument("cannot erase the root");
  for (int x : subtree(u)) {
    std::erase(members, x);
    parent.erase(x);
    edge_cost.erase(x);
    uncovered.erase(x);
  }
}

double RootedForest::cost() const {
  double s = 0;
  for (const RootedTree& t : trees) s += t.cost();
  return s;
}

double RootedForest::ell_uncovered(const Instance& inst) const {
  double s = 0;
  for (const RootedTree& t : trees)
    for (int v : t.uncovered) s += inst.ell(v);
  return s;
}

RootedForest min_rooted_forest(const Instance& inst, const std::vector<int>& roots,
                               const std::vector<int>& uncovered) {
  RootedForest forest;
  if (uncovered.empty()) return forest;
  if (roots.empty()) throw std::invalid_argument("no roots");

  // Best root per client, smaller id on ties.
  std::vector<int> sorted_roots = roots;
  std::sort(sorted_roots.begin(), sorted_roots.end());
  auto best_root = [&](int u) {
    int arg = sorted_roots[0];
    double best = inst.c(u, arg);
    for (int r : sorted_roots)
      if (inst.c(u, r) < best) {
        best = inst.c(u, r);
        arg = r;
      }
    return std::pair<int, double>{arg, best};
  };

  // Prim over {super} + uncovered, super first.
  const int n = static_cast<int>(uncovered.size());
  std::vector<char> in_tree(n, 0);
  std::vector<double> key(n);
  std::vector<int> par(n, -1);  // -1: super node
  for (int i = 0; i < n; ++i) key[i] = best_root(uncovered[i]).second;
  std::vector<int> attach_order;
  for (int it = 0; it < n; ++it) {
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      if (in_tree[i]) continue;
      if (pick < 0 || key[i] < key[pick] ||
          (key[i] == key[pick] && uncovered[i] < uncovered[pick]))
        pick = i;
    }
    in_tree[pick] = 1;
    attach_order.push_back(pick);
    for (int i = 0; i < n; ++i) {
      if (in_tree[i]) continue;
      const double c = inst.c(uncovered[pick], uncovered[i]);
      if (c < key[i]) {
        key[i] = c;
        par[i] = pick;
      }
    }
  }

  // Group members by the root their super edge resolves to.
  std::map<int, RootedTree> by_root;
  std::vector<int> resolved(n, -1);
  for (int i : attach_order) {
    const int u = uncovered[i];
    int root_id;
    int parent_node;
    double cost;
    if (par[i] < 0) {
      auto [r, c] = best_root(u);
      root_id = r;
      parent_node = r;
      cost = c;
    } else {
      root_id = resolved[par[i]];
      parent_node = uncovered[par[i]];
      cost = inst.c(u, parent_node);
    }
    resolved[i] = root_id;
    RootedTree& t = by_root[root_id];
    t.root = root_id;
    t.members.push_back(u);
    t.parent[u] = parent_node;
    t.edge_cost[u] = cost;
    t.uncovered.insert(u);
  }
  for (auto& [r, t] : by_root) {
    std::sort(t.members.begin(), t.members.end());
    forest.trees.push_back(std::move(t));
  }
  return forest;
}

}  // namespace mdvrp
