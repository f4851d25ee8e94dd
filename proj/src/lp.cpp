#include "mdvrp/lp.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "mdvrp/flow.hpp"

namespace mdvrp {

namespace {

// Local node index inside a block: 0 is the depot, support clients follow in
// ascending id order.
int local_index(const LpBlock& b, int node) {
  if (node == b.r) return 0;
  const auto it = std::lower_bound(b.support.begin(), b.support.end(), node);
  return 1 + static_cast<int>(it - b.support.begin());
}

}  // namespace

CvrpLpModel build_base_lp(const Instance& inst) {
  if (inst.k < 3) throw std::invalid_argument("relaxation requires k >= 3");
  CvrpLpModel model;
  model.inst = &inst;
  const int n = inst.n_clients;
  const int m = inst.n_depots;
  const long N = n + m;
  model.full_x_vars = static_cast<long>(m) * n * 2 * (N * (N - 1) / 2);
  model.full_z_vars = static_cast<long>(m) * n * n;

  // Blocks with their eliminated-column structure.
  for (int r = inst.depot_begin(); r < inst.depot_end(); ++r) {
    for (int v = 0; v < n; ++v) {
      LpBlock b;
      b.r = r;
      b.v = v;
      for (int u = 0; u < n; ++u)
        if (inst.c(u, r) <= inst.c(v, r)) b.support.push_back(u);
      b.col0 = model.lp.num_cols;
      for (int u : b.support) b.edges.push_back({r, u});
      for (int u : b.support) {
        if (u == v) continue;  // no flow leaves the far client
        for (int w : b.support)
          if (w != u) b.edges.push_back({u, w});
      }
      for (auto [t, h] : b.edges) model.lp.add_col(inst.c(t, h));
      model.blocks.push_back(std::move(b));
    }
  }

  // Per-block rows.
  for (const LpBlock& b : model.blocks) {
    const int s = static_cast<int>(b.support.size());
    std::vector<std::vector<std::pair<int, double>>> in_cols(s + 1), out_cols(s + 1);
    for (std::size_t e = 0; e < b.edges.size(); ++e) {
      const int col = b.col0 + static_cast<int>(e);
      out_cols[local_index(b, b.edges[e].first)].push_back({col, 1.0});
      in_cols[local_index(b, b.edges[e].second)].push_back({col, 1.0});
    }
    const int lv = local_index(b, b.v);

    // Flow conservation at intermediate clients.
    for (int u : b.support) {
      if (u == b.v) continue;
      const int lu = local_index(b, u);
      LpRow row;
      row.sense = RowSense::EQ;
      row.rhs = 0;
      for (auto [c, w] : out_cols[lu]) row.coef.push_back({c, w});
      for (auto [c, w] : in_cols[lu]) row.coef.push_back({c, -w});
      model.lp.rows.push_back(std::move(row));
    }

    // Depot out-degree equals the far client's in-degree (two units each).
    if (s >= 2) {
      LpRow row;
      row.sense = RowSense::EQ;
      row.rhs = 0;
      for (auto [c, w] : out_cols[0]) row.coef.push_back({c, w});
      for (auto [c, w] : in_cols[lv]) row.coef.push_back({c, -w});
      model.lp.rows.push_back(std::move(row));
    }

    // Coverage monotonicity: z(u) <= z(v), i.e. in(u) <= in(v)/2.
    for (int u : b.support) {
      if (u == b.v) continue;
      const int lu = local_index(b, u);
      LpRow row;
      row.sense = RowSense::LE;
      row.rhs = 0;
      for (auto [c, w] : in_cols[lu]) row.coef.push_back({c, w});
      for (auto [c, w] : in_cols[lv]) row.coef.push_back({c, -0.5 * w});
      model.lp.rows.push_back(std::move(row));
    }

    // Capacity: sum_u z(u) <= k * z(v).
    if (s >= 2) {
      LpRow row;
      row.sense = RowSense::LE;
      row.rhs = 0;
      for (int u : b.support) {
        if (u == b.v) continue;
        for (auto [c, w] : in_cols[local_index(b, u)]) row.coef.push_back({c, w});
      }
      const double coef_v = -(inst.k - 1) * 0.5;
      for (auto [c, w] : in_cols[lv]) row.coef.push_back({c, coef_v * w});
      model.lp.rows.push_back(std::move(row));
    }
  }

  // Assignment: every client is covered exactly once across all blocks.
  {
    std::vector<LpRow> cover(n);
    for (int u = 0; u < n; ++u) {
      cover[u].sense = RowSense::EQ;
      cover[u].rhs = 1;
    }
    for (const LpBlock& b : model.blocks) {
      for (std::size_t e = 0; e < b.edges.size(); ++e) {
        const int head = b.edges[e].second;
        if (head == b.r) continue;
        const double w = head == b.v ? 0.5 : 1.0;
        cover[head].coef.push_back({b.col0 + static_cast<int>(e), w});
      }
    }
    for (auto& row : cover) model.lp.rows.push_back(std::move(row));
  }
  return model;
}

LpSolution extract_solution(const CvrpLpModel& model, const Eigen::VectorXd& x) {
  const Instance& inst = *model.inst;
  LpSolution sol;
  sol.blocks.resize(model.blocks.size());
  double depot_mass = 0;
  sol.opt_lp = 0;
  for (std::size_t bi = 0; bi < model.blocks.size(); ++bi) {
    const LpBlock& b = model.blocks[bi];
    BlockValues& vals = sol.blocks[bi];
    std::map<int, double> inflow;
    for (std::size_t e = 0; e < b.edges.size(); ++e) {
      const double val = x[b.col0 + static_cast<int>(e)];
      sol.opt_lp += val * inst.c(b.edges[e].first, b.edges[e].second);
      if (val <= 0) continue;
      vals.x[b.edges[e]] = val;
      inflow[b.edges[e].second] += val;
    }
    for (int u : b.support) {
      const double zin = inflow.count(u) ? inflow[u] : 0.0;
      const double z = u == b.v ? zin / 2 : zin;
      if (z > 0) vals.z[u] = z;
    }
    const double zvv = vals.z.count(b.v) ? vals.z[b.v] : 0.0;
    depot_mass += 2.0 * inst.c(b.v, b.r) * zvv;
  }
  sol.delta = sol.opt_lp > 0 ? 1.0 - depot_mass / sol.opt_lp : 0.0;
  sol.delta = std::clamp(sol.delta, 0.0, 1.0);
  return sol;
}

std::vector<CutViolation> separate_cuts(const CvrpLpModel& model,
                                        const LpSolution& sol, double tol) {
  std::vector<CutViolation> found;
  for (std::size_t bi = 0; bi < model.blocks.size(); ++bi) {
    const LpBlock& b = model.blocks[bi];
    const BlockValues& vals = sol.blocks[bi];
    if (vals.z.empty()) continue;
    const int s = static_cast<int>(b.support.size());
    for (auto [u, zu] : vals.z) {
      if (zu <= tol) continue;
      const double need = zu;  // every r-u cut must carry z(u)
      MaxFlow<double> mf(s + 1);
      for (const auto& [edge, val] : vals.x)
        mf.add_edge(local_index(b, edge.first), local_index(b, edge.second), val);
      const double flow = mf.solve(0, local_index(b, u));
      if (flow < need - tol) {
        CutViolation cut;
        cut.block = static_cast<int>(bi);
        cut.u = u;
        for (int local : mf.min_cut_sink_side())
          if (local >= 1) cut.sink_side.push_back(b.support[local - 1]);
        cut.violation = need - flow;
        found.push_back(std::move(cut));
      }
    }
  }
  return found;
}

LpRow make_cut_row(const CvrpLpModel& model, const CutViolation& cut) {
  const LpBlock& b = model.blocks[cut.block];
  std::set<int> inside(cut.sink_side.begin(), cut.sink_side.end());
  LpRow row;
  row.sense = RowSense::GE;
  row.rhs = 0;
  const double zcoef = cut.u == b.v ? 0.5 : 1.0;
  for (std::size_t e = 0; e < b.edges.size(); ++e) {
    const auto [t, h] = b.edges[e];
    const int col = b.col0 + static_cast<int>(e);
    double w = 0;
    if (!inside.count(t) && inside.count(h)) w += 1.0;
    if (h == cut.u) w -= zcoef;
    if (w != 0) row.coef.push_back({col, w});
  }
  return row;
}

LpSolution solve_lp_cutting_plane(const Instance& inst, LpOptions opts,
                                  CvrpLpModel* out_model, LpSolveStats* out_stats) {
  CvrpLpModel model = build_base_lp(inst);
  SimplexSolver solver(model.lp, opts.simplex);
  LpResult res = solver.solve();
  LpSolveStats stats;
  std::set<std::pair<int, std::vector<int>>> seen;
  while (true) {
    if (res.status != LpStatus::Optimal)
      throw std::runtime_error("relaxation solve failed (status " +
                               std::to_string(static_cast<int>(res.status)) + ")");
    LpSolution sol = extract_solution(model, res.x);
    std::vector<LpRow> rows;
    for (CutViolation& cut : separate_cuts(model, sol, opts.sep_tol)) {
      std::vector<int> key = cut.sink_side;
      key.push_back(cut.u);
      std::sort(key.begin(), key.end());
      if (!seen.insert({cut.block, std::move(key)}).second) continue;
      rows.push_back(make_cut_row(model, cut));
    }
    if (rows.empty()) {
      sol.opt_lp = res.objective;
      stats.simplex_iterations = solver.iterations();
      if (out_model) *out_model = std::move(model);
      if (out_stats) *out_stats = stats;
      return sol;
    }
    if (++stats.cut_rounds > opts.max_cut_rounds)
      throw std::runtime_error("cut round limit exceeded after " +
                               std::to_string(stats.cut_rounds) + " rounds");
    stats.cuts_added += static_cast<int>(rows.size());
    res = solver.add_rows_and_resolve(rows);
  }
}

}  // namespace mdvrp
