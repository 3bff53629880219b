#pragma once

// Dense two-phase simplex for the small feasibility problems in normals.hpp.
// Standard form: minimize c^t x subject to A x = b, x >= 0. Bland's rule
// throughout, so the pivot sequence is deterministic and cannot cycle.

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "simplexvol/error.hpp"

namespace simplexvol::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  double infeasibility = 0.0;  ///< phase-1 optimum
};

struct Options {
  double pivot_tol = 1e-11;
  double feas_tol = 1e-9;
  int max_iterations = 5000;
};

namespace detail {

class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int n_struct)
      : rows_(static_cast<int>(a.rows())), n_(n_struct) {
    // Columns: structural [0, n), artificial [n, n+rows), rhs last.
    t_ = Eigen::MatrixXd::Zero(rows_ + 1, n_ + rows_ + 1);
    basis_.resize(rows_);
    for (int i = 0; i < rows_; ++i) {
      const double s = b(i) < 0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = s * a.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, rhs()) = s * b(i);
      basis_[i] = n_ + i;
    }
  }

  int rhs() const { return n_ + rows_; }
  double value(int row) const { return t_(row, rhs()); }

  /// Loads objective row for costs over all columns and prices out the basis.
  void set_objective(const Eigen::VectorXd& cost) {
    t_.row(rows_).setZero();
    t_.row(rows_).head(cost.size()) = cost.transpose();
    for (int i = 0; i < rows_; ++i) {
      const double cb = basis_[i] < cost.size() ? cost(basis_[i]) : 0.0;
      if (cb != 0.0) t_.row(rows_) -= cb * t_.row(i);
    }
  }

  /// Runs simplex iterations over columns in [0, allowed). Returns false if unbounded.
  bool optimize(int allowed, const Options& opt, int& iterations) {
    for (;;) {
      if (++iterations > opt.max_iterations) {
        throw Error(Errc::LPNumericalFailure, "simplex iteration cap reached");
      }
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        if (t_(rows_, j) < -opt.pivot_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        const double p = t_(i, enter);
        if (p <= opt.pivot_tol) continue;
        const double ratio = value(i) / p;
        if (ratio < best - 1e-14 || (std::abs(ratio - best) <= 1e-14 && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i <= rows_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  /// Pivots basic artificials (at zero level) out where a structural column allows it.
  void expel_artificials(double pivot_tol) {
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < n_) continue;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > pivot_tol) {
          pivot(i, j);
          break;
        }
      }
      // Otherwise the row is redundant; the artificial stays basic at zero.
    }
  }

  double objective() const { return -t_(rows_, rhs()); }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < n_) x(basis_[i]) = std::max(0.0, value(i));
    }
    return x;
  }

 private:
  int rows_;
  int n_;
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace detail

inline Result solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                    const Options& opt = {}) {
  if (a.rows() != b.size() || a.cols() != c.size()) {
    throw Error(Errc::DimMismatch, "LP dimensions disagree");
  }
  const int rows = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  detail::Tableau tab(a, b, n);
  int iterations = 0;

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + rows);
  phase1.tail(rows).setOnes();
  tab.set_objective(phase1);
  tab.optimize(n + rows, opt, iterations);
  Result r;
  r.infeasibility = tab.objective();
  if (r.infeasibility > opt.feas_tol * (1.0 + b.cwiseAbs().maxCoeff())) {
    r.status = Status::Infeasible;
    return r;
  }
  tab.expel_artificials(opt.pivot_tol);

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + rows);
  phase2.head(n) = c;
  tab.set_objective(phase2);
  if (!tab.optimize(n, opt, iterations)) {
    r.status = Status::Unbounded;
    return r;
  }
  r.status = Status::Optimal;
  r.x = tab.solution();
  r.objective = c.dot(r.x);
  return r;
}

}  // namespace simplexvol::lp
