#include "mdvrp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mdvrp/decompose.hpp"  // CertificationError

namespace mdvrp {

namespace {

// Downward cost of the most expensive path to a leaf, per node.
std::map<int, double> down_costs(const RootedTree& tree) {
  std::map<int, double> down;
  const auto ch = tree.children();
  auto visit = [&](auto&& self, int u) -> double {
    double best = 0;
    auto it = ch.find(u);
    if (it != ch.end())
      for (int c : it->second)
        best = std::max(best, tree.edge_cost.at(c) + self(self, c));
    down[u] = best;
    return best;
  };
  visit(visit, tree.root);
  return down;
}

int trunk_child(const RootedTree& tree, const std::map<int, double>& down, int u) {
  const auto ch = tree.children();
  auto it = ch.find(u);
  if (it == ch.end() || it->second.empty()) return -1;
  int arg = -1;
  double best = -1;
  for (int c : it->second) {
    const double d = tree.edge_cost.at(c) + down.at(c);
    if (d > best) {  // ties keep the smaller id (children are ascending)
      best = d;
      arg = c;
    }
  }
  return arg;
}

}  // namespace

double trunk_cost(const RootedTree& tree) {
  return down_costs(tree).at(tree.root);
}

std::vector<int> trunk_nodes(const RootedTree& tree) {
  const auto down = down_costs(tree);
  std::vector<int> nodes = {tree.root};
  int u = tree.root;
  while (true) {
    const int c = trunk_child(tree, down, u);
    if (c < 0) break;
    nodes.push_back(c);
    u = c;
  }
  return nodes;
}

bool tree_is_short(const Instance& inst, const RootedTree& tree, int k) {
  const int nu = static_cast<int>(tree.uncovered.size());
  if (nu == 0) return true;
  double ell = 0;
  for (int v : tree.uncovered) ell += inst.ell(v);
  // trunk <= c/2 + ell/(4p) with p = |U|/k; the unique threshold for which
  // both the short and the tall charging arguments close.
  const double threshold = tree.cost() / 2 + ell * k / (4.0 * nu);
  return trunk_cost(tree) <= threshold;
}

std::vector<int> tree_dfs_order(const RootedTree& tree) {
  const auto down = down_costs(tree);
  const auto ch = tree.children();
  std::vector<int> order;
  auto visit = [&](auto&& self, int u) -> void {
    auto it = ch.find(u);
    if (it != ch.end()) {
      std::vector<int> kids = it->second;
      const int tc = trunk_child(tree, down, u);
      std::stable_partition(kids.begin(), kids.end(), [&](int c) { return c == tc; });
      for (int c : kids) self(self, c);
    }
    if (u != tree.root && tree.uncovered.count(u)) order.push_back(u);
  };
  visit(visit, tree.root);
  return order;
}

OrderedLine build_line(const Instance& inst, const RootedPath& path,
                       const std::vector<const RootedTree*>& trees, int k) {
  OrderedLine line;
  line.depot = path.depot;
  line.seq.push_back(path.depot);
  line.tree_of.push_back(-1);

  std::map<int, const RootedTree*> tree_at;
  for (const RootedTree* t : trees) {
    if (t->uncovered.empty()) continue;  // nothing left to cover or order
    if (tree_at.count(t->root))
      throw CertificationError("two residual trees share a root");
    tree_at[t->root] = t;
  }

  auto splice_tree = [&](int root_node, int base_pos) {
    auto it = tree_at.find(root_node);
    if (it == tree_at.end()) return;
    const RootedTree* t = it->second;
    OrderedLine::TreeRef ref;
    ref.tree = t;
    ref.base_pos = base_pos;
    ref.is_short = tree_is_short(inst, *t, k);
    ref.n_uncovered = static_cast<int>(t->uncovered.size());
    const int tree_index = static_cast<int>(line.trees.size());
    for (int v : tree_dfs_order(*t)) {
      line.seq.push_back(v);
      line.tree_of.push_back(tree_index);
    }
    line.trees.push_back(ref);
    // Structural edges, covered members included.
    for (int v : t->members) {
      line.parent[v] = t->parent.at(v);
      line.parent_cost[v] = t->edge_cost.at(v);
    }
    tree_at.erase(it);
  };

  splice_tree(path.depot, 0);
  int prev = path.depot;
  for (int v : path.clients) {
    line.parent[v] = prev;
    line.parent_cost[v] = inst.c(prev, v);
    const int pos = static_cast<int>(line.seq.size());
    line.seq.push_back(v);
    line.tree_of.push_back(-1);
    splice_tree(v, pos);
    prev = v;
  }
  if (!tree_at.empty())
    throw CertificationError("residual tree rooted outside its path");
  return line;
}

std::vector<Subsequence> split_with_offset(const OrderedLine& line, int tau, int k) {
  const int len = static_cast<int>(line.seq.size());
  std::vector<Subsequence> out;
  // Block boundaries at 1-based positions tau, tau+k, ...; position 1 is the
  // depot.  The leading block, when tau > 1, is anchored at the depot.
  std::vector<std::pair<int, int>> blocks;  // 0-based inclusive ranges
  if (tau > 1 && tau - 2 >= 0) blocks.push_back({0, std::min(len - 1, tau - 2)});
  for (int start = tau - 1; start < len; start += k)
    blocks.push_back({start, std::min(len - 1, start + k - 1)});

  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    auto [start, end] = blocks[bi];
    const bool last = bi + 1 == blocks.size();
    int q = -1;
    if (!last) {
      q = end + 1;  // the next split position
      const int ti = line.tree_of[q];
      if (ti >= 0 && !line.trees[ti].is_short) {
        const int base = line.trees[ti].base_pos;
        if (base < start || base > end)
          throw CertificationError("tall tree base escapes its block");
        Subsequence prefix{start, base, start == 0 ? 0 : start, -1};
        Subsequence suffix{base + 1, end, q, q};
        out.push_back(prefix);
        if (suffix.start <= suffix.end) out.push_back(suffix);
        continue;
      }
    }
    out.push_back({start, end, start == 0 ? 0 : start, -1});
  }
  return out;
}

std::optional<Tour> subsequence_to_tour(const Instance& inst,
                                        const OrderedLine& line,
                                        const Subsequence& seg) {
  std::set<int> sigma;  // node ids spanned by the piece
  std::vector<int> covered;
  for (int p = seg.start; p <= seg.end; ++p) {
    sigma.insert(line.seq[p]);
    if (p != 0) covered.push_back(line.seq[p]);
  }
  if (seg.appended >= 0) sigma.insert(line.seq[seg.appended]);
  if (covered.empty()) return std::nullopt;

  // Minimal subtree of the combined tree spanning sigma: walk each node's
  // root path, cutting off at already-marked nodes.
  std::set<int> span_nodes;
  std::map<int, std::vector<int>> adj;
  auto add_edge = [&](int a, int b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (int s : sigma) {
    int x = s;
    std::vector<int> walk;
    while (!span_nodes.count(x) && line.parent.count(x)) {
      walk.push_back(x);
      x = line.parent.at(x);
    }
    if (!span_nodes.count(x)) walk.push_back(x);  // reached the depot
    for (int w : walk) span_nodes.insert(w);
    for (std::size_t i = 0; i + 1 < walk.size(); ++i) add_edge(walk[i], walk[i + 1]);
    if (!walk.empty() && span_nodes.count(x) && walk.back() != x) add_edge(walk.back(), x);
  }
  // Trim branches that carry no sigma node: repeatedly drop non-sigma leaves.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = adj.begin(); it != adj.end();) {
      if (it->second.size() == 1 && !sigma.count(it->first)) {
        const int leaf = it->first;
        const int nb = it->second[0];
        std::erase(adj[nb], leaf);
        it = adj.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  for (auto& [x, list] : adj) std::sort(list.begin(), list.end());

  const int connector_node = line.seq[seg.connector];
  const int depot = inst.is_depot(connector_node)
                        ? connector_node
                        : inst.nearest_depot(connector_node);
  Tour t;
  t.depot = depot;
  std::set<int> keep(covered.begin(), covered.end());
  if (seg.appended >= 0) keep.erase(line.seq[seg.appended]);
  // First visits of a closed walk over the doubled span, entered at the
  // connector.
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
  visit(visit, connector_node, -1);
  t.clients = std::move(order);
  if (t.clients.empty()) return std::nullopt;
  return t;
}

namespace {

struct OffsetEvaluation {
  double total = 0;
  std::vector<Tour> tours;
  // Accounting per tree / path for the certificates.
  std::map<std::pair<int, int>, int> edge_uses;  // canonical edges of the span
  double path_connector_charge = 0;              // doubled depot connections
  std::vector<double> tree_connector_charge;     // per tree
};

std::pair<int, int> canon(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

OffsetEvaluation evaluate_offset(const Instance& inst, const OrderedLine& line,
                                 int tau, int k) {
  OffsetEvaluation ev;
  ev.tree_connector_charge.assign(line.trees.size(), 0);
  const auto pieces = split_with_offset(line, tau, k);

  // Membership checks: every position in exactly one piece, appended split
  // positions in exactly two.
  std::vector<int> member_count(line.seq.size(), 0);
  for (const Subsequence& seg : pieces) {
    for (int p = seg.start; p <= seg.end; ++p) member_count[p]++;
    if (seg.appended >= 0) member_count[seg.appended]++;
  }
  for (std::size_t p = 0; p < line.seq.size(); ++p) {
    const int expect = 1;
    if (member_count[p] != expect && member_count[p] != 2)
      throw CertificationError("split piece membership is broken");
    if (member_count[p] == 2) {
      const int ti = line.tree_of[p];
      if (ti < 0 || line.trees[ti].is_short)
        throw CertificationError("only tall-tree split nodes may repeat");
    }
  }

  for (const Subsequence& seg : pieces) {
    // Span edges for the accounting (identical to the tour construction).
    std::set<int> sigma;
    for (int p = seg.start; p <= seg.end; ++p) sigma.insert(line.seq[p]);
    if (seg.appended >= 0) sigma.insert(line.seq[seg.appended]);
    std::set<int> span;
    std::set<std::pair<int, int>> edges;
    for (int s : sigma) {
      int x = s;
      while (!span.count(x) && line.parent.count(x)) {
        span.insert(x);
        edges.insert(canon(x, line.parent.at(x)));
        x = line.parent.at(x);
      }
      span.insert(x);
    }
    // Trim non-sigma leaves.
    bool changed = true;
    while (changed) {
      changed = false;
      std::map<int, int> degree;
      for (auto [a, b] : edges) {
        degree[a]++;
        degree[b]++;
      }
      for (auto it = edges.begin(); it != edges.end();) {
        auto [a, b] = *it;
        const int leaf = degree[a] == 1 && !sigma.count(a)   ? a
                         : degree[b] == 1 && !sigma.count(b) ? b
                                                             : -1;
        if (leaf >= 0) {
          it = edges.erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
    double span_cost = 0;
    for (auto [a, b] : edges) {
      ev.edge_uses[canon(a, b)]++;
      const int child = line.parent.count(a) && line.parent.at(a) == b ? a : b;
      span_cost += line.parent_cost.at(child);
    }
    const int connector_node = line.seq[seg.connector];
    const double connect = inst.is_depot(connector_node)
                               ? 0.0
                               : inst.depot_distance(connector_node);
    const int cti = line.tree_of[seg.connector];
    if (cti >= 0)
      ev.tree_connector_charge[cti] += 2 * connect;
    else
      ev.path_connector_charge += 2 * connect;

    auto tour = subsequence_to_tour(inst, line, seg);
    if (tour) {
      const double cost = tour_cost(inst, *tour);
      if (cost > 2 * span_cost + 2 * connect + 1e-7 * std::max(1.0, span_cost))
        throw CertificationError("piece tour exceeds its doubled-span budget");
      if (static_cast<int>(tour->clients.size()) > k)
        throw CertificationError("piece tour covers more than k clients");
      ev.total += cost;
      ev.tours.push_back(std::move(*tour));
    }
  }
  return ev;
}

}  // namespace

PartitionLedger partition_path(const Instance& inst, const RootedPath& path,
                               const std::vector<const RootedTree*>& trees,
                               int k, double beta) {
  OrderedLine line = build_line(inst, path, trees, k);
  PartitionLedger ledger;
  ledger.path_cost = path_cost(inst, path);
  for (const RootedTree* t : trees) {
    ledger.trees_cost += t->cost();
    for (int v : t->uncovered) ledger.ell_tree_uncovered += inst.ell(v);
  }
  for (int v : path.clients) ledger.ell_path_clients += inst.ell(v);

  // Per-tree averaged accounting accumulators.
  std::vector<double> tree_term(line.trees.size(), 0);
  double path_term = 0;

  ledger.best_cost = std::numeric_limits<double>::infinity();
  for (int tau = 1; tau <= k; ++tau) {
    OffsetEvaluation ev = evaluate_offset(inst, line, tau, k);
    ledger.cost_by_offset.push_back(ev.total);
    if (ev.total < ledger.best_cost - 1e-12) {
      ledger.best_cost = ev.total;
      ledger.best_offset = tau;
      ledger.tours = std::move(ev.tours);
    }

    // Structural certificates: path edges once, tree edges at most twice,
    // the doubly-used edges of a tree forming one path that reaches the
    // trunk (tall) or the root (short).
    std::vector<std::set<std::pair<int, int>>> doubled(line.trees.size());
    for (const auto& [edge, uses] : ev.edge_uses) {
      const int child =
          line.parent.count(edge.first) && line.parent.at(edge.first) == edge.second
              ? edge.first
              : edge.second;
      int ti = -1;
      for (std::size_t i = 0; i < line.trees.size(); ++i)
        if (line.trees[i].tree->parent.count(child)) ti = static_cast<int>(i);
      if (ti < 0) {
        if (uses > 1) throw CertificationError("path edge doubled across pieces");
      } else {
        if (uses > 2) throw CertificationError("tree edge used more than twice");
        if (uses == 2) doubled[ti].insert(edge);
      }
    }
    for (std::size_t ti = 0; ti < line.trees.size(); ++ti) {
      if (doubled[ti].empty()) continue;
      std::map<int, int> degree;
      for (auto [a, b] : doubled[ti]) {
        degree[a]++;
        degree[b]++;
      }
      int endpoints = 0;
      for (auto [x, d] : degree) {
        if (d > 2) throw CertificationError("doubly-used tree edges branch");
        if (d == 1) ++endpoints;
      }
      if (endpoints != 2)
        throw CertificationError("doubly-used tree edges do not form one path");
      const RootedTree& t = *line.trees[ti].tree;
      const auto trunk = trunk_nodes(t);
      const std::set<int> trunk_set(trunk.begin(), trunk.end());
      bool touches = false;
      for (auto [x, d] : degree) {
        if (line.trees[ti].is_short ? x == t.root : trunk_set.count(x))
          touches = true;
      }
      if (!touches)
        throw CertificationError(line.trees[ti].is_short
                                     ? "short-tree doubling misses the root"
                                     : "tall-tree doubling misses the trunk");
    }

    // Split positions per tree: at most one.
    for (std::size_t ti = 0; ti < line.trees.size(); ++ti) {
      int in_s = 0;
      for (int p = tau - 1; p < static_cast<int>(line.seq.size()); p += k)
        if (line.tree_of[p] == static_cast<int>(ti)) ++in_s;
      if (in_s > 1)
        throw CertificationError("tree holds more than one split position");
    }

    // Averaged accounting: doubled edges plus connector charges per tree.
    for (const auto& [edge, uses] : ev.edge_uses) {
      const int child =
          line.parent.count(edge.first) && line.parent.at(edge.first) == edge.second
              ? edge.first
              : edge.second;
      int ti = -1;
      for (std::size_t i = 0; i < line.trees.size(); ++i)
        if (line.trees[i].tree->parent.count(child)) ti = static_cast<int>(i);
      const double c = 2.0 * uses * line.parent_cost.at(child);
      if (ti < 0)
        path_term += c;
      else
        tree_term[ti] += c;
    }
    path_term += ev.path_connector_charge;
    for (std::size_t ti = 0; ti < line.trees.size(); ++ti)
      tree_term[ti] += ev.tree_connector_charge[ti];
  }

  const double scale = std::max(1.0, inst.diameter() * inst.n_clients);
  // Averaged-over-offsets certificates.
  if (path_term / k >
      2 * ledger.path_cost + ledger.ell_path_clients + 1e-6 * scale)
    throw CertificationError("path accounting exceeds its averaged budget");
  for (std::size_t ti = 0; ti < line.trees.size(); ++ti) {
    const RootedTree& t = *line.trees[ti].tree;
    double ell = 0;
    for (int v : t.uncovered) ell += inst.ell(v);
    const double p = static_cast<double>(line.trees[ti].n_uncovered) / k;
    const double budget = (2 + p) * t.cost() + 1.5 * ell;
    if (tree_term[ti] / k > budget + 1e-6 * scale)
      throw CertificationError("tree accounting exceeds its averaged budget");
  }
  // The guarantee for the chosen offset.
  const double bound = 2 * ledger.path_cost + 2.5 * ledger.trees_cost +
                       ledger.ell_path_clients +
                       (1.0 / beta) * ledger.ell_tree_uncovered;
  if (ledger.best_cost > bound + 1e-6 * scale)
    throw CertificationError("splitting bound violated by the best offset");
  return ledger;
}

}  // namespace mdvrp
