#include "mdvrp/sampling.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mdvrp {

double path_cost(const Instance& inst, const RootedPath& p) {
  if (p.clients.empty()) return 0;
  double s = inst.c(p.depot, p.clients.front());
  for (std::size_t i = 0; i + 1 < p.clients.size(); ++i)
    s += inst.c(p.clients[i], p.clients[i + 1]);
  return s;
}

RootedPath branching_to_path(const Instance& inst, const Branching& b, int r,
                             int v) {
  (void)inst;
  if (b.root != r) throw std::invalid_argument("branching not rooted at r");
  std::map<int, std::vector<int>> children;
  std::map<int, int> parent;
  for (auto [t, h] : b.edges) {
    children[t].push_back(h);
    parent[h] = t;
  }
  if (!parent.count(v)) throw std::invalid_argument("far client missing from branching");
  for (auto& [u, ch] : children) std::sort(ch.begin(), ch.end());

  // Nodes on the r -> v tree path; their v-side child is visited last so the
  // walk finishes at v.
  std::set<int> on_path = {v};
  for (int u = v; u != r;) {
    u = parent[u];
    on_path.insert(u);
  }

  RootedPath path;
  path.depot = r;
  // Pre-order first visits.
  std::vector<int> stack_order;
  auto visit = [&](auto&& self, int u) -> void {
    if (u != r) stack_order.push_back(u);
    auto it = children.find(u);
    if (it == children.end()) return;
    std::vector<int> order = it->second;
    std::stable_partition(order.begin(), order.end(),
                          [&](int c) { return !on_path.count(c); });
    for (int c : order) self(self, c);
  };
  visit(visit, r);
  // The far client is pinned to the end.
  std::erase(stack_order, v);
  stack_order.push_back(v);
  path.clients = std::move(stack_order);
  return path;
}

std::vector<RootedPath> sample_paths(const Instance& inst,
                                     const std::vector<BlockDecomposition>& decomps,
                                     Rng& rng,
                                     std::vector<std::vector<char>>* sampled) {
  std::vector<RootedPath> raw;
  if (sampled) sampled->assign(decomps.size(), {});
  for (std::size_t bi = 0; bi < decomps.size(); ++bi) {
    const BlockDecomposition& d = decomps[bi];
    std::vector<char> taken(d.branchings.size(), 0);
    for (std::size_t i = 0; i < d.branchings.size(); ++i) {
      const double mu = d.weights[i];
      if (mu > 1.0 + 1e-12)
        throw std::invalid_argument("branching weight exceeds one");
      const double coin = rng.uniform01();
      if (coin >= mu) continue;
      taken[i] = 1;
      if (d.branchings[i].edges.empty()) continue;  // trivial leftover weight
      raw.push_back(branching_to_path(inst, d.branchings[i], d.r, d.v));
    }
    if (sampled) (*sampled)[bi] = std::move(taken);
  }
  return raw;
}

SamplingOutcome deduplicate(const Instance& inst, std::vector<RootedPath> raw,
                            const std::vector<std::vector<char>>& sampled) {
  SamplingOutcome out;
  out.sampled = sampled;
  for (const RootedPath& p : raw) out.raw_cost += path_cost(inst, p);

  // (depot, per-depot creation index) ranking used to pick survivors.
  std::vector<std::pair<int, int>> rank(raw.size());
  std::map<int, int> depot_count;
  for (std::size_t i = 0; i < raw.size(); ++i)
    rank[i] = {raw[i].depot, depot_count[raw[i].depot]++};

  for (int v = 0; v < inst.n_clients; ++v) {
    int keeper = -1;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (std::find(raw[i].clients.begin(), raw[i].clients.end(), v) ==
          raw[i].clients.end())
        continue;
      if (keeper < 0 || rank[i] < rank[keeper]) keeper = static_cast<int>(i);
    }
    if (keeper < 0) continue;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (static_cast<int>(i) == keeper) continue;
      std::erase(raw[i].clients, v);
    }
  }

  std::set<int> covered;
  for (RootedPath& p : raw) {
    if (p.clients.empty()) continue;
    for (int v : p.clients) covered.insert(v);
    out.cost += path_cost(inst, p);
    out.paths.push_back(std::move(p));
  }
  for (int v = 0; v < inst.n_clients; ++v)
    if (!covered.count(v)) out.uncovered.push_back(v);
  return out;
}

}  // namespace mdvrp
