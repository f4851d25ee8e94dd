#include "mdvrp/solve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mdvrp/baselines.hpp"
#include "mdvrp/decompose.hpp"
#include "mdvrp/exact.hpp"
#include "mdvrp/forest.hpp"
#include "mdvrp/partition.hpp"
#include "mdvrp/pruning.hpp"

namespace mdvrp {

namespace {

constexpr std::int64_t kGridDenominator = 1'000'000'000;

}  // namespace

Algo algo_from_name(const std::string& name) {
  if (name == "lp-round") return Algo::LpRound;
  if (name == "tree-split") return Algo::TreeSplit;
  if (name == "tour-split") return Algo::TourSplit;
  if (name == "brute") return Algo::Brute;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::LpRound: return "lp-round";
    case Algo::TreeSplit: return "tree-split";
    case Algo::TourSplit: return "tour-split";
    case Algo::Brute: return "brute";
  }
  return "?";
}

PipelinePlan plan_pipeline(const Instance& inst, double gamma, LpOptions lp_opts) {
  if (gamma <= 0 || gamma > 0.5)
    throw std::invalid_argument("gamma must lie in (0, 1/2]");
  PipelinePlan plan;
  plan.gamma = gamma;
  CvrpLpModel model;
  const LpSolution lp = solve_lp_cutting_plane(inst, lp_opts, &model);
  plan.opt_lp = lp.opt_lp;
  plan.delta = lp.delta;

  for (std::size_t bi = 0; bi < model.blocks.size(); ++bi) {
    const LpBlock& block = model.blocks[bi];
    const BlockValues& vals = lp.blocks[bi];
    const double zvv = vals.z.count(block.v) ? vals.z.at(block.v) : 0.0;
    if (2 * gamma * zvv * kGridDenominator < 1) continue;  // empty budget

    // Local node space: 0 = depot, support clients follow.
    std::vector<int> locals = {block.r};
    std::map<int, int> local_of;
    local_of[block.r] = 0;
    std::vector<std::tuple<int, int, double>> arcs;
    for (const auto& [edge, value] : vals.x) {
      for (int node : {edge.first, edge.second})
        if (!local_of.count(node)) {
          local_of[node] = static_cast<int>(locals.size());
          locals.push_back(node);
        }
      arcs.push_back({local_of[edge.first], local_of[edge.second], gamma * value});
    }
    if (!is_preflow(static_cast<int>(locals.size()), 0, arcs, 1e-6))
      throw CertificationError("scaled block flow is not a preflow");

    std::vector<GridArc> grid = rationalize_arcs(arcs, kGridDenominator);
    const int n_local = static_cast<int>(locals.size());
    const std::vector<std::int64_t> lambda = connectivity_profile(n_local, 0, grid);
    // The far client owns the whole budget; clamp to its grid connectivity
    // so every branching reaches it.
    const std::int64_t budget =
        std::min(std::llround(2 * gamma * zvv * kGridDenominator),
                 static_cast<long long>(lambda[local_of[block.v]]));
    if (budget <= 0) continue;

    // Separation has converged, so each covered client keeps connectivity at
    // least gamma z(u) up to the grid resolution.
    for (const auto& [u, zu] : vals.z) {
      if (u == block.v) continue;
      const double have = static_cast<double>(lambda[local_of[u]]) / kGridDenominator;
      if (have < gamma * zu - 1e-6)
        throw CertificationError("block connectivity below gamma z after separation");
    }

    BranchingSet set =
        decompose_preflow(n_local, 0, grid, budget, kGridDenominator);

    BlockDecomposition out;
    out.r = block.r;
    out.v = block.v;
    for (const WeightedBranching& wb : set.items) {
      Branching global;
      global.root = block.r;
      for (auto [t, h] : wb.branching.edges)
        global.edges.push_back({locals[t], locals[h]});
      std::sort(global.edges.begin(), global.edges.end());
      out.branchings.push_back(std::move(global));
      out.weights.push_back(static_cast<double>(wb.weight_num) /
                            static_cast<double>(set.denom));
    }
    plan.decomps.push_back(std::move(out));
  }
  return plan;
}

PipelineResult run_pipeline(const Instance& inst, const PipelinePlan& plan,
                            std::uint64_t seed) {
  PipelineResult result;
  RunTrace& trace = result.trace;
  trace.seed = seed;
  trace.gamma = plan.gamma;
  trace.opt_lp = plan.opt_lp;
  trace.delta = plan.delta;
  trace.lb = radial_lb(inst);

  Rng rng(seed);
  std::vector<std::vector<char>> sampled;
  std::vector<RootedPath> raw = sample_paths(inst, plan.decomps, rng, &sampled);
  SamplingOutcome outcome = deduplicate(inst, std::move(raw), sampled);
  trace.c_paths = outcome.cost;
  trace.n_paths = static_cast<int>(outcome.paths.size());
  trace.n_uncovered_init = static_cast<int>(outcome.uncovered.size());
  for (int v : outcome.uncovered) trace.ell_unc_init += inst.ell(v);
  for (const RootedPath& p : outcome.paths)
    for (int v : p.clients) trace.ell_path_clients += inst.ell(v);

  // Forest rooted at depots and path clients.
  std::vector<int> roots;
  for (int r = inst.depot_begin(); r < inst.depot_end(); ++r) roots.push_back(r);
  for (const RootedPath& p : outcome.paths)
    for (int v : p.clients) roots.push_back(v);
  RootedForest forest = min_rooted_forest(inst, roots, outcome.uncovered);
  trace.c_forest_init = forest.cost();

  Solution& sol = result.solution;
  for (RootedTree& tree : forest.trees) {
    PruneResult pruned = prune_tree(inst, tree, inst.k);
    trace.prune_tours_cost += pruned.tours_cost;
    for (Tour& t : pruned.tours) sol.tours.push_back(std::move(t));
  }
  trace.c_forest_resid = forest.cost();
  for (const RootedTree& tree : forest.trees)
    for (int v : tree.uncovered) trace.ell_unc_resid += inst.ell(v);

  // Partition each path together with the residual trees rooted on it.
  std::map<int, std::vector<const RootedTree*>> trees_by_root;
  for (const RootedTree& tree : forest.trees)
    trees_by_root[tree.root].push_back(&tree);

  std::set<int> depots_with_path;
  auto partition_one = [&](const RootedPath& path) {
    std::vector<const RootedTree*> attached;
    auto it = trees_by_root.find(path.depot);
    if (it != trees_by_root.end() && !depots_with_path.count(path.depot)) {
      attached.insert(attached.end(), it->second.begin(), it->second.end());
    }
    depots_with_path.insert(path.depot);
    for (int v : path.clients) {
      auto vt = trees_by_root.find(v);
      if (vt != trees_by_root.end())
        attached.insert(attached.end(), vt->second.begin(), vt->second.end());
    }
    PartitionLedger ledger = partition_path(inst, path, attached, inst.k);
    trace.partition_tours_cost += ledger.best_cost;
    for (Tour& t : ledger.tours) sol.tours.push_back(std::move(t));
  };

  for (const RootedPath& p : outcome.paths) partition_one(p);
  // Depot-rooted residual trees with no path attach to an empty path.
  for (int r = inst.depot_begin(); r < inst.depot_end(); ++r) {
    if (depots_with_path.count(r) || !trees_by_root.count(r)) continue;
    RootedPath empty;
    empty.depot = r;
    partition_one(empty);
  }

  trace.total_cost = solution_cost(inst, sol);
  const CertificateReport cert = check_certificates(inst, trace);
  if (!cert.ok())
    throw CertificationError("run certificate failed: " + cert.violations.front());
  const FeasibilityReport feas = check_feasible(inst, sol);
  if (!feas.ok())
    throw CertificationError("infeasible pipeline output: " + feas.violations.front());
  return result;
}

namespace {

Solution nearest_depot_singletons(const Instance& inst) {
  Solution sol;
  for (int v = 0; v < inst.n_clients; ++v) {
    Tour t;
    t.depot = inst.nearest_depot(v);
    t.clients = {v};
    sol.tours.push_back(std::move(t));
  }
  return sol;
}

}  // namespace

Solution solve_instance(const Instance& inst, Algo algo, const SolveOptions& opts,
                        RunTrace* trace) {
  Preprocessed pre = preprocess(inst);
  const Instance& sub = pre.inst;
  Solution on_sub;
  if (sub.n_clients == 0) {
    // Every client sits on a depot; the lift adds the free tours.
  } else {
    switch (algo) {
      case Algo::Brute:
        on_sub = brute_force_opt(sub);
        break;
      case Algo::TreeSplit:
        on_sub = hkm_tree_splitting(sub);
        break;
      case Algo::TourSplit:
        on_sub = lsl_tour_splitting(sub);
        break;
      case Algo::LpRound: {
        if (sub.k == 1) {
          on_sub = nearest_depot_singletons(sub);
        } else if (sub.k == 2) {
          if (sub.n_clients > 10)
            throw std::invalid_argument(
                "capacity 2 is only solved exactly, up to 10 clients");
          on_sub = brute_force_opt(sub);
        } else {
          PipelinePlan plan = plan_pipeline(sub, opts.gamma, opts.lp);
          PipelineResult res = run_pipeline(sub, plan, opts.seed);
          on_sub = std::move(res.solution);
          if (trace) *trace = res.trace;
        }
        break;
      }
    }
  }
  return lift_solution(inst, pre, on_sub);
}

}  // namespace mdvrp
