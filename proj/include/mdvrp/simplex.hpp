// Revised simplex over sparse columns with a product-form basis inverse.
// Supports warm restarts after appending rows, which is how the cutting-plane
// loop reoptimizes.  Solutions are basic, i.e. vertices of the feasible
// region.
#ifndef MDVRP_SIMPLEX_HPP
#define MDVRP_SIMPLEX_HPP

#include <Eigen/Dense>
#include <vector>

namespace mdvrp {

enum class RowSense { LE, GE, EQ };

struct LpRow {
  std::vector<std::pair<int, double>> coef;  // (structural column, value)
  RowSense sense = RowSense::LE;
  double rhs = 0;
};

struct LpModel {
  int num_cols = 0;
  std::vector<double> obj;
  std::vector<LpRow> rows;

  int add_col(double cost) {
    obj.push_back(cost);
    return num_cols++;
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

struct LpResult {
  LpStatus status = LpStatus::IterLimit;
  double objective = 0;
  Eigen::VectorXd x;  // structural values
};

struct SimplexOptions {
  double opt_tol = 1e-9;        // reduced-cost threshold for entering
  double pivot_tol = 1e-9;      // smallest usable pivot magnitude
  int bland_after = 1000;       // degenerate pivots before Bland's rule
  long iter_limit = 500000;
  int reinvert_every = 3000;    // product-form factors before reinversion
};

class SimplexSolver {
 public:
  explicit SimplexSolver(const LpModel& model, SimplexOptions opt = SimplexOptions());

  // Full solve from the all-logical basis.
  LpResult solve();

  // Appends rows and reoptimizes from the current basis.
  LpResult add_rows_and_resolve(const std::vector<LpRow>& new_rows);

  const LpResult& result() const { return result_; }
  long iterations() const { return iterations_; }
  int num_rows() const { return m_; }

 private:
  struct Eta {  // basis change: column at position `pos` replaced by `w`
    int dim;
    int pos;
    std::vector<std::pair<int, double>> w;
    double wpos;
  };
  struct Border {  // rows [m1, m2) appended; C maps old basis values to them
    int m1, m2;
    std::vector<std::vector<std::pair<int, double>>> c_rows;  // size m2-m1
    std::vector<double> diag;  // bottom-right diagonal (+-1)
  };
  struct Op {
    bool is_eta;
    Eta eta;
    Border border;
  };

  void append_row_internal(const LpRow& row, bool warm);
  void ftran(Eigen::VectorXd& v) const;
  void btran(Eigen::VectorXd& v) const;
  void reinvert();
  void refresh_basic_values();
  LpResult run_phases();
  bool run_simplex(const std::vector<double>& costs, bool phase_one);
  LpResult extract();

  // Columns: structural 0..n-1 in model order, then logicals appended as
  // rows arrive.  Each column is sparse over rows.
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> real_cost_;
  std::vector<char> is_artificial_;
  int num_structural_ = 0;
  int m_ = 0;
  std::vector<double> rhs_;

  std::vector<int> basis_;          // row position -> column
  std::vector<int> pos_of_col_;     // column -> row position or -1
  Eigen::VectorXd xb_;              // basic values
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  bool have_lu_ = false;
  int lu_dim_ = 0;
  std::vector<Op> ops_;

  SimplexOptions opt_;
  LpResult result_;
  long iterations_ = 0;
  bool solved_once_ = false;
};

}  // namespace mdvrp

#endif
