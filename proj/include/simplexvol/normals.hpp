#pragma once

/**
 * @brief Euclidean outward-normal families.
 *
 * A family of n+1 unit vectors in R^n is the set of outward face normals of
 * a Euclidean n-simplex exactly when it lies in no closed half-space, and is
 * a limit of such families exactly when it lies in no open half-space, i.e.
 * when sum a_i v_i = 0 has a nonzero solution with a >= 0. Both sides of the
 * closure criterion are decided by linear programs so they can be checked
 * against each other.
 */

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "simplexvol/error.hpp"
#include "simplexvol/gram.hpp"
#include "simplexvol/lp.hpp"
#include "simplexvol/symlin.hpp"

namespace simplexvol {

/// Unit vectors stored as the columns of a dim x count matrix.
class NormalFamily {
 public:
  explicit NormalFamily(Eigen::MatrixXd vectors) : v_(std::move(vectors)) {
    if (v_.cols() < 1 || v_.rows() < 1) throw Error(Errc::InvalidArgument, "empty normal family");
    for (Eigen::Index i = 0; i < v_.cols(); ++i) {
      if (std::abs(v_.col(i).norm() - 1.0) > 1e-10) {
        throw Error(Errc::InvalidArgument, "normal family vectors must have unit length");
      }
    }
  }

  /// Rescales each column to unit length first.
  static NormalFamily normalized(Eigen::MatrixXd vectors) {
    for (Eigen::Index i = 0; i < vectors.cols(); ++i) {
      const double len = vectors.col(i).norm();
      if (len == 0.0) throw Error(Errc::InvalidArgument, "zero vector in normal family");
      vectors.col(i) /= len;
    }
    return NormalFamily(std::move(vectors));
  }

  int dim() const { return static_cast<int>(v_.rows()); }
  int count() const { return static_cast<int>(v_.cols()); }
  const Eigen::MatrixXd& vectors() const { return v_; }
  Eigen::VectorXd vector(int i) const { return v_.col(i); }

 private:
  Eigen::MatrixXd v_;
};

/// Nonnegative solution of sum a_i v_i = 0, normalized to sum a_i = 1.
struct KernelSolution {
  Eigen::VectorXd coeffs;
  std::vector<int> support;  ///< 0-based indices of nonzero coefficients
};

inline GramMatrix gram_of(const NormalFamily& f) {
  Eigen::MatrixXd g = f.vectors().transpose() * f.vectors();
  g.diagonal().setOnes();
  return GramMatrix(g);
}

namespace detail {

inline KernelSolution make_kernel_solution(Eigen::VectorXd coeffs) {
  const double mx = coeffs.maxCoeff();
  KernelSolution k;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    if (coeffs(i) <= 1e-12 * mx) {
      coeffs(i) = 0.0;
    } else {
      k.support.push_back(static_cast<int>(i));
    }
  }
  k.coeffs = std::move(coeffs);
  return k;
}

/// Feasibility of { V_S a = 0, a >= 0, sum a = 1 } over the columns in `cols`.
inline std::optional<Eigen::VectorXd> nonneg_kernel(const Eigen::MatrixXd& v, const std::vector<int>& cols,
                                                    double tol) {
  const auto d = v.rows();
  const auto k = static_cast<Eigen::Index>(cols.size());
  Eigen::MatrixXd a(d + 1, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    a.col(j).head(d) = v.col(cols[j]);
    a(d, j) = 1.0;
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d + 1);
  b(d) = 1.0;
  lp::Options opt;
  opt.feas_tol = tol;
  const lp::Result r = lp::solve(a, b, Eigen::VectorXd::Zero(k), opt);
  if (r.status != lp::Status::Optimal) return std::nullopt;
  Eigen::VectorXd full = Eigen::VectorXd::Zero(v.cols());
  for (Eigen::Index j = 0; j < k; ++j) full(cols[j]) = r.x(j);
  return full;
}

}  // namespace detail

/**
 * @brief Lemma-4 style membership: outward normals of a genuine Euclidean simplex.
 *
 * Requires count == dim + 1. True iff every dim-subset has smallest singular
 * value > tol and the one-dimensional kernel has a representative with all
 * entries of one sign and min|a_i| > tol * max|a_i|.
 */
inline bool in_E(const NormalFamily& f, double tol = kDefaultTol) {
  if (f.count() != f.dim() + 1) throw Error(Errc::DimMismatch, "in_E needs n+1 vectors in R^n");
  const Eigen::MatrixXd& v = f.vectors();
  const int m = f.count();
  for (int skip = 0; skip < m; ++skip) {
    Eigen::MatrixXd sub(f.dim(), m - 1);
    for (int j = 0, c = 0; j < m; ++j) {
      if (j != skip) sub.col(c++) = v.col(j);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
    if (svd.singularValues().minCoeff() <= tol) return false;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeFullV);
  const Eigen::VectorXd a = svd.matrixV().col(m - 1);
  const double amax = a.cwiseAbs().maxCoeff();
  const bool same_sign = (a.array() > 0).all() || (a.array() < 0).all();
  return same_sign && a.cwiseAbs().minCoeff() > tol * amax;
}

/// Primal closure test: sum a_i v_i = 0 with a >= 0, sum a_i = 1. Returns the LP's solution.
inline std::pair<bool, std::optional<KernelSolution>> in_Ebar(const NormalFamily& f,
                                                              double tol = kDefaultTol) {
  std::vector<int> all(f.count());
  for (int i = 0; i < f.count(); ++i) all[i] = i;
  auto sol = detail::nonneg_kernel(f.vectors(), all, tol);
  if (!sol) return {false, std::nullopt};
  return {true, detail::make_kernel_solution(*sol)};
}

/**
 * @brief Dual closure test: no strictly separating direction.
 *
 * Solves max s subject to v_i . w >= s, |w_k| <= 1, and reports s* <= tol.
 * Standard form uses w = w' - 1 with w' in [0, 2] and s = s+ - s-.
 */
inline double separation_margin(const NormalFamily& f) {
  const int d = f.dim();
  const int m = f.count();
  const Eigen::MatrixXd& v = f.vectors();
  // Columns: w' (d), s+ , s-, slack_i (m), upper slack u_k (d).
  const int cols = d + 2 + m + d;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + d, cols);
  Eigen::VectorXd b(m + d);
  for (int i = 0; i < m; ++i) {
    a.row(i).head(d) = v.col(i).transpose();
    a(i, d) = -1.0;
    a(i, d + 1) = 1.0;
    a(i, d + 2 + i) = -1.0;
    b(i) = v.col(i).sum();
  }
  for (int k = 0; k < d; ++k) {
    a(m + k, k) = 1.0;
    a(m + k, d + 2 + m + k) = 1.0;
    b(m + k) = 2.0;
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cols);
  c(d) = -1.0;
  c(d + 1) = 1.0;
  const lp::Result r = lp::solve(a, b, c);
  if (r.status != lp::Status::Optimal) {
    throw Error(Errc::LPNumericalFailure, "separation LP did not reach an optimum");
  }
  return r.x(d) - r.x(d + 1);
}

inline bool in_Ebar_dual(const NormalFamily& f, double tol = kDefaultTol) {
  return separation_margin(f) <= tol;
}

/// Nonnegative kernel solution of minimal support; ties broken lexicographically.
inline KernelSolution positive_kernel(const NormalFamily& f, double tol = kDefaultTol) {
  const int m = f.count();
  if (m > kMaxEnumerationSize) throw Error(Errc::TooLarge, "support enumeration limited to 20 vectors");
  if (!in_Ebar(f, tol).first) throw Error(Errc::NotInClosure, "no nonnegative kernel solution exists");
  for (int k = 1; k <= m; ++k) {
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) c[i] = i;
    do {
      if (auto sol = detail::nonneg_kernel(f.vectors(), c, tol)) return detail::make_kernel_solution(*sol);
    } while (detail::next_combination(c, m));
  }
  throw Error(Errc::NotInClosure, "support enumeration found no solution");
}

/**
 * @brief Unit vectors v_i in R^target_dim with [v_i . v_j] = A.
 *
 * Eigen-truncated factor: coordinate k of v_i is sqrt(lambda_k) q_k[i] with
 * eigenvalues in descending order and each eigenvector's first nonzero entry
 * made positive. Coordinates past rank(A) are zero.
 */
inline NormalFamily vectors_from_psd_gram(const GramMatrix& a, int target_dim, double tol = kDefaultTol) {
  const SymMatrix& s = a.sym();
  const EigenDecomp e = eig_sym(s);
  const double band = tol * s.scale();
  if (e.values(0) < -band) throw Error(Errc::NotPSD, "Gram matrix is not positive semidefinite");
  const int m = a.size();
  int rank = 0;
  for (int i = 0; i < m; ++i) rank += e.values(i) > band ? 1 : 0;
  if (target_dim < 1 || target_dim > m) throw Error(Errc::InvalidArgument, "target_dim out of range");
  if (rank > target_dim) throw Error(Errc::RankTooHigh, "rank exceeds the target dimension");
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(target_dim, m);
  for (int k = 0; k < rank; ++k) {
    const int col = m - 1 - k;  // descending
    Eigen::VectorXd q = e.vectors.col(col);
    for (int i = 0; i < m; ++i) {
      if (std::abs(q(i)) > 1e-12) {
        if (q(i) < 0) q = -q;
        break;
      }
    }
    v.row(k) = std::sqrt(e.values(col)) * q.transpose();
  }
  return NormalFamily::normalized(v);
}

}  // namespace simplexvol
