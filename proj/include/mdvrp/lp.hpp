// Flow relaxation of the routing problem and its cutting-plane solver.
//
// For every depot r and client v there is a commodity block sending two
// units of r->v flow; z-values (the per-tour coverage indicators) are affine
// in the flow and recovered after the solve, so the model handed to the
// simplex holds flow columns only.  Connectivity cuts are separated lazily
// with a min-cut oracle.
#ifndef MDVRP_LP_HPP
#define MDVRP_LP_HPP

#include <map>
#include <vector>

#include "mdvrp/instance.hpp"
#include "mdvrp/simplex.hpp"

namespace mdvrp {

struct LpBlock {
  int r = -1;  // depot node
  int v = -1;  // far client of the block
  std::vector<int> support;                 // clients u with c(u,r) <= c(v,r)
  std::vector<std::pair<int, int>> edges;   // directed node pairs
  int col0 = 0;                             // first flow column of the block
};

struct CvrpLpModel {
  const Instance* inst = nullptr;
  std::vector<LpBlock> blocks;
  LpModel lp;
  long full_x_vars = 0;  // |R|*|C|*2*C(|V|,2) flow columns before elimination
  long full_z_vars = 0;
};

// Base model: flow conservation, assignment, coverage monotonicity,
// distance-based variable elimination and capacity rows.  No cuts.
// Requires k >= 3.
CvrpLpModel build_base_lp(const Instance& inst);

struct BlockValues {
  std::map<std::pair<int, int>, double> x;  // edge -> flow value
  std::map<int, double> z;                  // client -> coverage value
};

struct LpSolution {
  double opt_lp = 0;
  double delta = 0;
  std::vector<BlockValues> blocks;  // parallel to CvrpLpModel::blocks
};

LpSolution extract_solution(const CvrpLpModel& model, const Eigen::VectorXd& x);

struct CutViolation {
  int block = -1;
  int u = -1;                   // client whose connectivity is short
  std::vector<int> sink_side;   // violating node set (client ids, contains u)
  double violation = 0;
};

// One violated cut per (block, u) at most, found by max-flow.
std::vector<CutViolation> separate_cuts(const CvrpLpModel& model,
                                        const LpSolution& sol,
                                        double tol = 1e-7);

LpRow make_cut_row(const CvrpLpModel& model, const CutViolation& cut);

struct LpSolveStats {
  int cut_rounds = 0;
  int cuts_added = 0;
  long simplex_iterations = 0;
};

struct LpOptions {
  double sep_tol = 1e-7;
  int max_cut_rounds = 10000;
  SimplexOptions simplex;
};

// Alternates solving and separation until no cut is violated.  The returned
// solution is a vertex of the final model.
LpSolution solve_lp_cutting_plane(const Instance& inst, LpOptions opts = {},
                                  CvrpLpModel* out_model = nullptr,
                                  LpSolveStats* out_stats = nullptr);

}  // namespace mdvrp

#endif
