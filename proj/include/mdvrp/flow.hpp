// Max-flow / min-cut on small directed graphs, templated on the capacity
// scalar.  Used with double capacities by the LP separation oracle and with
// 64-bit integer capacities by the branching decomposition.
#ifndef MDVRP_FLOW_HPP
#define MDVRP_FLOW_HPP

#include <limits>
#include <queue>
#include <vector>

namespace mdvrp {

template <typename Scalar>
class MaxFlow {
 public:
  explicit MaxFlow(int num_nodes) : head_(num_nodes) {}

  int add_edge(int from, int to, Scalar cap) {
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({to, cap});
    head_[from].push_back(id);
    edges_.push_back({from, Scalar(0)});
    head_[to].push_back(id + 1);
    return id;
  }

  int num_nodes() const { return static_cast<int>(head_.size()); }

  // Dinic. Returns the max flow value; residual state is kept for
  // min_cut_sink_side().
  Scalar solve(int source, int sink) {
    source_ = source;
    sink_ = sink;
    Scalar total(0);
    while (bfs_levels()) {
      iter_.assign(head_.size(), 0);
      while (true) {
        Scalar pushed = dfs_augment(source_, max_cap());
        if (pushed <= Scalar(0)) break;
        total += pushed;
      }
    }
    return total;
  }

  // After solve(): the complement of the residual-reachable set from the
  // source.  Contains the sink, excludes the source.
  std::vector<int> min_cut_sink_side() const {
    std::vector<char> reach(head_.size(), 0);
    std::queue<int> q;
    q.push(source_);
    reach[source_] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int id : head_[u]) {
        const Edge& e = edges_[id];
        if (e.cap > Scalar(0) && !reach[e.to]) {
          reach[e.to] = 1;
          q.push(e.to);
        }
      }
    }
    std::vector<int> side;
    for (int u = 0; u < num_nodes(); ++u)
      if (!reach[u]) side.push_back(u);
    return side;
  }

 private:
  struct Edge {
    int to;
    Scalar cap;  // residual capacity
  };

  static Scalar max_cap() {
    if constexpr (std::numeric_limits<Scalar>::has_infinity)
      return std::numeric_limits<Scalar>::infinity();
    else
      return std::numeric_limits<Scalar>::max();
  }

  bool bfs_levels() {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    q.push(source_);
    level_[source_] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int id : head_[u]) {
        const Edge& e = edges_[id];
        if (e.cap > Scalar(0) && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[sink_] >= 0;
  }

  Scalar dfs_augment(int u, Scalar limit) {
    if (u == sink_) return limit;
    for (std::size_t& i = iter_[u]; i < head_[u].size(); ++i) {
      const int id = head_[u][i];
      Edge& e = edges_[id];
      if (e.cap <= Scalar(0) || level_[e.to] != level_[u] + 1) continue;
      const Scalar pushed = dfs_augment(e.to, limit < e.cap ? limit : e.cap);
      if (pushed > Scalar(0)) {
        e.cap -= pushed;
        edges_[id ^ 1].cap += pushed;
        return pushed;
      }
    }
    return Scalar(0);
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> head_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
  int source_ = 0, sink_ = 0;
};

// Convenience wrapper over an explicit arc list.  Returns the max-flow value
// and a minimizing sink-side cut set.
template <typename Scalar>
struct MinCutResult {
  Scalar value;
  std::vector<int> sink_side;
};

template <typename Scalar>
MinCutResult<Scalar> min_cut(
    int num_nodes, const std::vector<std::tuple<int, int, Scalar>>& arcs,
    int source, int sink) {
  MaxFlow<Scalar> mf(num_nodes);
  for (const auto& [u, v, cap] : arcs) mf.add_edge(u, v, cap);
  const Scalar value = mf.solve(source, sink);
  return {value, mf.min_cut_sink_side()};
}

}  // namespace mdvrp

#endif
