#include "mdvrp/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "mdvrp/flow.hpp"

namespace mdvrp {

namespace {

using std::int64_t;

int64_t min_cut_value(int num_nodes, const std::vector<GridArc>& arcs, int s, int t) {
  MaxFlow<int64_t> mf(num_nodes);
  for (const auto& [u, v, cap] : arcs)
    if (cap > 0) mf.add_edge(u, v, cap);
  return mf.solve(s, t);
}

struct Extractor {
  int n;
  int root;
  std::vector<GridArc> f;                  // live capacities
  std::vector<int64_t> rho;                // live requirements
  int64_t budget;

  std::vector<int> splus() const {
    std::vector<int> s;
    for (int v = 0; v < n; ++v)
      if (rho[v] > 0) s.push_back(v);
    return s;
  }

  // Capacities after removing `eps` units along branching edges.
  std::vector<GridArc> reduced(const std::set<std::pair<int, int>>& bedges,
                               int64_t eps) const {
    std::vector<GridArc> out;
    out.reserve(f.size());
    for (const auto& [u, v, cap] : f) {
      const int64_t c = bedges.count({u, v}) ? cap - eps : cap;
      if (c > 0) out.push_back({u, v, c});
    }
    return out;
  }

  // Connectivity invariant: after subtracting eps along B, every node that
  // still carries a requirement must keep min-cut >= rho - eps if it is on B
  // and >= rho otherwise.
  bool invariant_holds(const std::set<std::pair<int, int>>& bedges,
                       const std::set<int>& bnodes, int64_t eps) const {
    const std::vector<GridArc> caps = reduced(bedges, eps);
    for (int v = 0; v < n; ++v) {
      if (rho[v] <= 0 || v == root) continue;
      const int64_t need = rho[v] - (bnodes.count(v) ? eps : 0);
      if (need <= 0) continue;
      if (min_cut_value(n, caps, root, v) < need) return false;
    }
    return true;
  }

  // Sorted outgoing support adjacency.
  std::vector<std::vector<std::pair<int, int64_t>>> adjacency() const {
    std::vector<std::vector<std::pair<int, int64_t>>> adj(n);
    for (const auto& [u, v, cap] : f)
      if (cap > 0) adj[u].push_back({v, cap});
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
  }

  // Drop leaves that carry no requirement; they only waste capacity.
  static void prune(std::set<std::pair<int, int>>& bedges, std::set<int>& bnodes,
                    const std::vector<int>& targets, int root) {
    const std::set<int> keep(targets.begin(), targets.end());
    bool changed = true;
    while (changed) {
      changed = false;
      std::map<int, int> out_deg;
      for (const auto& [u, v] : bedges) out_deg[u]++;
      for (auto it = bedges.begin(); it != bedges.end();) {
        const int head = it->second;
        if (!keep.count(head) && out_deg[head] == 0 && head != root) {
          bnodes.erase(head);
          it = bedges.erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
  }

  // Grow an r-branching covering every requirement node while maintaining
  // the connectivity invariant at eps = 1.
  bool grow(std::set<std::pair<int, int>>& bedges, std::set<int>& bnodes) const {
    const std::vector<int> targets = splus();
    const auto adj = adjacency();

    // Fast path: BFS reachability tree, pruned to the requirement nodes.
    {
      std::set<std::pair<int, int>> edges;
      std::set<int> nodes = {root};
      std::vector<int> queue = {root};
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const int u = queue[qi];
        for (auto [v, cap] : adj[u]) {
          if (nodes.count(v)) continue;
          nodes.insert(v);
          edges.insert({u, v});
          queue.push_back(v);
        }
      }
      bool covers = true;
      for (int t : targets) covers = covers && nodes.count(t);
      if (covers) {
        prune(edges, nodes, targets, root);
        if (invariant_holds(edges, nodes, 1)) {
          bedges = std::move(edges);
          bnodes = std::move(nodes);
          return true;
        }
      }
    }

    // Incremental growth with full invariant revalidation per candidate.
    bedges.clear();
    bnodes = {root};
    auto uncovered = [&]() {
      for (int t : targets)
        if (!bnodes.count(t)) return true;
      return false;
    };
    while (uncovered()) {
      bool progressed = false;
      // Candidates ordered by (head, tail) for determinism.
      std::vector<std::pair<int, int>> cands;
      for (int u : bnodes)
        for (auto [v, cap] : adj[u])
          if (!bnodes.count(v)) cands.push_back({v, u});
      std::sort(cands.begin(), cands.end());
      for (auto [v, u] : cands) {
        bedges.insert({u, v});
        bnodes.insert(v);
        if (invariant_holds(bedges, bnodes, 1)) {
          progressed = true;
          break;
        }
        bedges.erase({u, v});
        bnodes.erase(v);
      }
      if (!progressed) return false;
    }
    prune(bedges, bnodes, targets, root);
    return true;
  }
};

void certify(const BranchingSet& set, int num_nodes,
             const std::vector<GridArc>& arcs) {
  // Structure of each branching.
  for (const WeightedBranching& wb : set.items) {
    const Branching& b = wb.branching;
    if (wb.weight_num <= 0) throw CertificationError("branching weight not positive");
    std::map<int, int> indeg;
    std::set<int> nodes;
    for (auto [u, v] : b.edges) {
      indeg[v]++;
      nodes.insert(u);
      nodes.insert(v);
    }
    if (indeg.count(b.root)) throw CertificationError("root has an incoming arc");
    for (auto [v, d] : indeg)
      if (d != 1) throw CertificationError("node in-degree differs from one");
    // Connectivity from the root: BFS over branching arcs.
    std::set<int> seen = {b.root};
    std::vector<int> queue = {b.root};
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
      for (auto [u, v] : b.edges)
        if (u == queue[qi] && !seen.count(v)) {
          seen.insert(v);
          queue.push_back(v);
        }
    for (int v : nodes)
      if (!seen.count(v)) throw CertificationError("branching is not connected to the root");
  }

  // Weight budget.
  int64_t total = 0;
  for (const WeightedBranching& wb : set.items) total += wb.weight_num;
  if (total != set.budget_num) throw CertificationError("weights do not sum to the budget");

  // Edge capacities.
  std::map<std::pair<int, int>, int64_t> cap, used;
  for (const auto& [u, v, c] : arcs) cap[{u, v}] += c;
  for (const WeightedBranching& wb : set.items)
    for (auto e : wb.branching.edges) used[e] += wb.weight_num;
  for (const auto& [e, w] : used)
    if (w > cap[e]) throw CertificationError("edge capacity exceeded");

  // Coverage requirements.
  std::vector<int64_t> covered(num_nodes, 0);
  for (const WeightedBranching& wb : set.items)
    for (int v : wb.branching.covered_nodes()) covered[v] += wb.weight_num;
  for (int v = 0; v < num_nodes; ++v)
    if (v != set.root && covered[v] < set.requirement[v])
      throw CertificationError("coverage requirement missed");

  // Polynomial size.
  if (set.items.size() > arcs.size() + static_cast<std::size_t>(num_nodes) + 1)
    throw CertificationError("too many branchings");
}

}  // namespace

std::vector<int> Branching::covered_nodes() const {
  std::vector<int> nodes;
  for (auto [u, v] : edges) nodes.push_back(v);
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

bool Branching::contains(int node) const {
  if (node == root && !edges.empty()) return true;
  for (auto [u, v] : edges)
    if (u == node || v == node) return true;
  return false;
}

std::vector<int64_t> connectivity_profile(int num_nodes, int root,
                                          const std::vector<GridArc>& arcs) {
  std::vector<int64_t> lambda(num_nodes, 0);
  for (int v = 0; v < num_nodes; ++v)
    if (v != root) lambda[v] = min_cut_value(num_nodes, arcs, root, v);
  return lambda;
}

bool is_preflow(int num_nodes, int root,
                const std::vector<std::tuple<int, int, double>>& arcs,
                double tol) {
  std::vector<double> balance(num_nodes, 0);
  for (const auto& [u, v, val] : arcs) {
    if (val < -tol) return false;
    balance[v] += val;
    balance[u] -= val;
  }
  for (int v = 0; v < num_nodes; ++v)
    if (v != root && balance[v] < -tol) return false;
  return true;
}

std::vector<GridArc> rationalize_arcs(
    const std::vector<std::tuple<int, int, double>>& arcs, int64_t denom) {
  std::vector<GridArc> out;
  for (const auto& [u, v, val] : arcs) {
    const int64_t c = std::llround(val * static_cast<double>(denom));
    if (c > 0) out.push_back({u, v, c});
  }
  return out;
}

BranchingSet decompose_preflow(int num_nodes, int root,
                               const std::vector<GridArc>& arcs,
                               int64_t budget_num, int64_t denom) {
  if (budget_num < 0) throw std::invalid_argument("negative budget");
  BranchingSet set;
  set.root = root;
  set.denom = denom;
  set.budget_num = budget_num;
  set.lambda = connectivity_profile(num_nodes, root, arcs);
  set.requirement.assign(num_nodes, 0);
  for (int v = 0; v < num_nodes; ++v)
    if (v != root) set.requirement[v] = std::min(budget_num, set.lambda[v]);

  // Normalize by the common divisor; scaling (f, K) scales the output.
  int64_t g = budget_num;
  for (const auto& [u, v, c] : arcs) g = std::gcd(g, c);
  for (int v = 0; v < num_nodes; ++v) g = std::gcd(g, set.requirement[v]);
  if (g == 0) g = 1;

  Extractor ex;
  ex.n = num_nodes;
  ex.root = root;
  for (const auto& [u, v, c] : arcs)
    if (c > 0) ex.f.push_back({u, v, c / g});
  ex.rho.resize(num_nodes);
  for (int v = 0; v < num_nodes; ++v) ex.rho[v] = set.requirement[v] / g;
  ex.budget = budget_num / g;

  std::map<std::vector<std::pair<int, int>>, std::size_t> index_of;
  const std::size_t round_limit = 4 * (ex.f.size() + num_nodes) + 64;
  std::size_t rounds = 0;
  while (ex.budget > 0) {
    if (++rounds > round_limit)
      throw CertificationError("extraction did not terminate within the round limit");
    const std::vector<int> targets = ex.splus();
    if (targets.empty()) {
      // Remaining weight is carried by the trivial branching.
      Branching b;
      b.root = root;
      auto it = index_of.find(b.edges);
      if (it != index_of.end()) {
        set.items[it->second].weight_num += ex.budget * g;
      } else {
        index_of[b.edges] = set.items.size();
        set.items.push_back({std::move(b), ex.budget * g});
      }
      ex.budget = 0;
      break;
    }

    std::set<std::pair<int, int>> bedges;
    std::set<int> bnodes;
    if (!ex.grow(bedges, bnodes))
      throw CertificationError("no branching extension maintains connectivity");

    // Largest weight that keeps the remaining requirements routable.
    int64_t hi = ex.budget;
    for (const auto& [u, v, c] : ex.f)
      if (bedges.count({u, v})) hi = std::min(hi, c);
    int64_t lo = 1;
    while (lo < hi) {
      const int64_t mid = lo + (hi - lo + 1) / 2;
      if (ex.invariant_holds(bedges, bnodes, mid))
        lo = mid;
      else
        hi = mid - 1;
    }
    const int64_t eps = lo;
    if (!ex.invariant_holds(bedges, bnodes, eps))
      throw CertificationError("extraction step lost connectivity");

    for (auto& [u, v, c] : ex.f)
      if (bedges.count({u, v})) c -= eps;
    std::erase_if(ex.f, [](const GridArc& a) { return std::get<2>(a) <= 0; });
    for (int v : bnodes)
      if (v != root) ex.rho[v] = std::max<int64_t>(0, ex.rho[v] - eps);
    ex.budget -= eps;

    Branching b;
    b.root = root;
    b.edges.assign(bedges.begin(), bedges.end());
    auto it = index_of.find(b.edges);
    if (it != index_of.end()) {
      set.items[it->second].weight_num += eps * g;
    } else {
      index_of[b.edges] = set.items.size();
      set.items.push_back({std::move(b), eps * g});
    }
  }

  certify(set, num_nodes, arcs);
  return set;
}

}  // namespace mdvrp
