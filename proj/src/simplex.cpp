#include "mdvrp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mdvrp {

namespace {
constexpr double kEps = 1e-12;
}

SimplexSolver::SimplexSolver(const LpModel& model, SimplexOptions opt) : opt_(opt) {
  num_structural_ = model.num_cols;
  cols_.resize(num_structural_);
  real_cost_ = model.obj;
  is_artificial_.assign(num_structural_, 0);
  pos_of_col_.assign(num_structural_, -1);
  for (const LpRow& row : model.rows) append_row_internal(row, false);
}

void SimplexSolver::append_row_internal(const LpRow& row, bool warm) {
  // Merge duplicate entries, drop zeros, normalize to rhs >= 0.
  std::map<int, double> merged;
  for (auto [j, v] : row.coef)
    if (v != 0.0) merged[j] += v;
  double rhs = row.rhs;
  RowSense sense = row.sense;
  double sign = 1.0;
  if (rhs < 0) {
    sign = -1.0;
    rhs = -rhs;
    if (sense == RowSense::LE)
      sense = RowSense::GE;
    else if (sense == RowSense::GE)
      sense = RowSense::LE;
  }

  const int i = m_++;
  rhs_.push_back(rhs);
  double activity = 0;
  for (auto& [j, v] : merged) {
    const double coef = sign * v;
    cols_[j].push_back({i, coef});
    if (warm && result_.x.size() == num_structural_) activity += coef * result_.x[j];
  }

  auto add_logical = [&](double coef, bool artificial) {
    cols_.push_back({{i, coef}});
    real_cost_.push_back(0.0);
    is_artificial_.push_back(artificial ? 1 : 0);
    pos_of_col_.push_back(-1);
    return static_cast<int>(cols_.size()) - 1;
  };

  int slack = -1;
  if (sense == RowSense::LE) slack = add_logical(1.0, false);
  if (sense == RowSense::GE) slack = add_logical(-1.0, false);

  // Choose the basic column for this row so its value is nonnegative.  On a
  // cold start the basis must stay the identity, so GE rows take an
  // artificial even when rhs is zero.
  const double resid = rhs - activity;  // cold start: activity = 0
  int basic;
  double value;
  if (sense == RowSense::LE && resid >= 0) {
    basic = slack;
    value = resid;
  } else if (warm && sense == RowSense::GE && resid <= 0) {
    basic = slack;
    value = -resid;
  } else {
    basic = add_logical(resid >= 0 ? 1.0 : -1.0, true);
    value = std::abs(resid);
  }
  basis_.push_back(basic);
  pos_of_col_[basic] = i;
  xb_.conservativeResize(m_);
  xb_[i] = value;
}

void SimplexSolver::ftran(Eigen::VectorXd& v) const {
  if (have_lu_) {
    Eigen::VectorXd head = v.head(lu_dim_);
    v.head(lu_dim_) = lu_.solve(head);
  }
  for (const Op& op : ops_) {
    if (op.is_eta) {
      const Eta& e = op.eta;
      const double t = v[e.pos] / e.wpos;
      if (t != 0.0) {
        for (auto [i, val] : e.w)
          if (i != e.pos) v[i] -= val * t;
      }
      v[e.pos] = t;
    } else {
      const Border& b = op.border;
      for (int i = b.m1; i < b.m2; ++i) {
        double s = v[i];
        for (auto [j, c] : b.c_rows[i - b.m1]) s -= c * v[j];
        v[i] = s / b.diag[i - b.m1];
      }
    }
  }
}

void SimplexSolver::btran(Eigen::VectorXd& v) const {
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    const Op& op = *it;
    if (op.is_eta) {
      const Eta& e = op.eta;
      double s = v[e.pos];
      for (auto [i, val] : e.w)
        if (i != e.pos) s -= val * v[i];
      v[e.pos] = s / e.wpos;
    } else {
      const Border& b = op.border;
      for (int i = b.m1; i < b.m2; ++i) v[i] /= b.diag[i - b.m1];
      for (int i = b.m1; i < b.m2; ++i) {
        const double u = v[i];
        if (u == 0.0) continue;
        for (auto [j, c] : b.c_rows[i - b.m1]) v[j] -= c * u;
      }
    }
  }
  if (have_lu_) {
    Eigen::VectorXd head = v.head(lu_dim_);
    v.head(lu_dim_) = lu_.transpose().solve(head);
  }
}

void SimplexSolver::reinvert() {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
  for (int pos = 0; pos < m_; ++pos)
    for (auto [i, val] : cols_[basis_[pos]]) b(i, pos) = val;
  lu_.compute(b);
  lu_dim_ = m_;
  have_lu_ = true;
  ops_.clear();
}

void SimplexSolver::refresh_basic_values() {
  Eigen::VectorXd b(m_);
  for (int i = 0; i < m_; ++i) b[i] = rhs_[i];
  ftran(b);
  xb_ = b;
}

bool SimplexSolver::run_simplex(const std::vector<double>& costs, bool phase_one) {
  bool bland = false;
  int degenerate_streak = 0;
  Eigen::VectorXd y(m_), w(m_);
  while (true) {
    if (++iterations_ > opt_.iter_limit) {
      result_.status = LpStatus::IterLimit;
      return false;
    }
    // Duals for the current basis.
    for (int pos = 0; pos < m_; ++pos) y[pos] = costs[basis_[pos]];
    btran(y);

    // Pricing.
    int enter = -1;
    double best = -opt_.opt_tol;
    const int ncols = static_cast<int>(cols_.size());
    for (int j = 0; j < ncols; ++j) {
      if (pos_of_col_[j] >= 0 || is_artificial_[j]) continue;
      double d = costs[j];
      for (auto [i, v] : cols_[j]) d -= y[i] * v;
      if (bland) {
        if (d < -opt_.opt_tol) {
          enter = j;
          break;
        }
      } else if (d < best) {
        best = d;
        enter = j;
      }
    }
    if (enter < 0) return true;  // optimal for these costs

    w.setZero();
    for (auto [i, v] : cols_[enter]) w[i] = v;
    ftran(w);

    // Ratio test.  In phase two a basic artificial sitting at zero may not
    // increase, so a negative pivot entry forces it out at step zero.
    int leave = -1;
    double theta = std::numeric_limits<double>::infinity();
    double leave_w = 0;
    for (int pos = 0; pos < m_; ++pos) {
      const double wv = w[pos];
      double bound;
      if (wv > opt_.pivot_tol)
        bound = std::max(xb_[pos], 0.0) / wv;
      else if (!phase_one && is_artificial_[basis_[pos]] && wv < -opt_.pivot_tol)
        bound = 0.0;
      else
        continue;
      bool take;
      if (leave < 0)
        take = true;
      else if (bland)
        take = bound < theta - kEps ||
               (bound < theta + kEps && basis_[pos] < basis_[leave]);
      else
        take = bound < theta - kEps ||
               (bound < theta + kEps && std::abs(wv) > std::abs(leave_w));
      if (take) {
        leave = pos;
        theta = bound;
        leave_w = wv;
      }
    }
    if (leave < 0) {
      result_.status = LpStatus::Unbounded;
      return false;
    }

    // Pivot.
    theta = std::max(theta, 0.0);
    if (theta > 0) xb_ -= theta * w;
    xb_[leave] = theta;
    pos_of_col_[basis_[leave]] = -1;
    basis_[leave] = enter;
    pos_of_col_[enter] = leave;

    Eta e;
    e.dim = m_;
    e.pos = leave;
    e.wpos = w[leave];
    for (int i = 0; i < m_; ++i)
      if (std::abs(w[i]) > kEps) e.w.push_back({i, w[i]});
    ops_.push_back({true, std::move(e), {}});

    if (theta < 1e-11) {
      if (++degenerate_streak > opt_.bland_after) bland = true;
    } else {
      degenerate_streak = 0;
    }

    if (static_cast<int>(ops_.size()) > opt_.reinvert_every) {
      reinvert();
      refresh_basic_values();
    }
  }
}

LpResult SimplexSolver::extract() {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(num_structural_);
  for (int pos = 0; pos < m_; ++pos) {
    const int j = basis_[pos];
    if (j < num_structural_) x[j] = std::max(xb_[pos], 0.0);
  }
  double obj = 0;
  for (int j = 0; j < num_structural_; ++j) obj += real_cost_[j] * x[j];
  result_.objective = obj;
  result_.x = std::move(x);
  return result_;
}

LpResult SimplexSolver::run_phases() {
  // Phase one only when some artificial is basic at a positive level.
  double infeas = 0;
  for (int pos = 0; pos < m_; ++pos)
    if (is_artificial_[basis_[pos]]) infeas += std::max(xb_[pos], 0.0);
  const double scale = 1.0 + *std::max_element(rhs_.begin(), rhs_.end());
  if (infeas > 1e-10 * scale) {
    std::vector<double> phase1(cols_.size(), 0.0);
    for (std::size_t j = 0; j < cols_.size(); ++j)
      if (is_artificial_[j]) phase1[j] = 1.0;
    if (!run_simplex(phase1, true)) return result_;
    double left = 0;
    for (int pos = 0; pos < m_; ++pos)
      if (is_artificial_[basis_[pos]]) left += std::max(xb_[pos], 0.0);
    if (left > 1e-7 * scale) {
      result_.status = LpStatus::Infeasible;
      return extract();
    }
  }
  if (!run_simplex(real_cost_, false)) return result_;
  refresh_basic_values();
  result_.status = LpStatus::Optimal;
  return extract();
}

LpResult SimplexSolver::solve() {
  solved_once_ = true;
  return run_phases();
}

LpResult SimplexSolver::add_rows_and_resolve(const std::vector<LpRow>& new_rows) {
  if (!solved_once_) throw std::logic_error("add_rows_and_resolve before solve");
  if (new_rows.empty()) return result_;
  const int m1 = m_;
  for (const LpRow& row : new_rows) append_row_internal(row, true);

  Border border;
  border.m1 = m1;
  border.m2 = m_;
  border.c_rows.resize(m_ - m1);
  border.diag.resize(m_ - m1);
  for (int i = m1; i < m_; ++i) {
    // Coefficients of the previously basic columns in the new row.
    for (int pos = 0; pos < m1; ++pos) {
      const int j = basis_[pos];
      for (auto [ri, v] : cols_[j])
        if (ri == i) border.c_rows[i - m1].push_back({pos, v});
    }
    for (auto [ri, v] : cols_[basis_[i]])
      if (ri == i) border.diag[i - m1] = v;
  }
  ops_.push_back({false, {}, std::move(border)});
  return run_phases();
}

}  // namespace mdvrp
