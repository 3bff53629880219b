#pragma once

/**
 * @brief Dense symmetric-matrix kernel.
 *
 * Determinants, adjugates, principal submatrices, eigendecomposition,
 * semidefiniteness tests with a uniform tolerance policy, PSD square roots,
 * signatures and sign-diagonal conjugation. All tolerance-driven tests use
 * the band `tol * (1 + ||M||_inf)`.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "simplexvol/error.hpp"

namespace simplexvol {

inline constexpr double kDefaultTol = 1e-9;

/// Real symmetric matrix of dimension >= 1, stored fully.
class SymMatrix {
 public:
  /// Symmetrizes as (M + M^t)/2, which leaves exactly symmetric input unchanged.
  explicit SymMatrix(const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
      throw Error(Errc::InvalidArgument, "SymMatrix needs a nonempty square matrix");
    }
    if (!m.allFinite()) throw Error(Errc::InvalidArgument, "SymMatrix entries must be finite");
    m_ = 0.5 * (m + m.transpose());
  }

  static SymMatrix identity(int dim) { return SymMatrix(Eigen::MatrixXd::Identity(dim, dim)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& matrix() const { return m_; }

  /// Max absolute row sum.
  double norm_inf() const { return m_.cwiseAbs().rowwise().sum().maxCoeff(); }

  /// The multiplier used by every tolerance test on this matrix.
  double scale() const { return 1.0 + norm_inf(); }

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  Eigen::MatrixXd m_;
};

struct EigenDecomp {
  Eigen::VectorXd values;   ///< ascending
  Eigen::MatrixXd vectors;  ///< orthogonal, columns are eigenvectors
};

struct Signature {
  int n_pos = 0;
  int n_neg = 0;
  int n_zero = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

namespace detail {

inline double det_small(const Eigen::MatrixXd& a) {
  switch (a.rows()) {
    case 0: return 1.0;
    case 1: return a(0, 0);
    case 2: return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    case 3:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
             a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    default: break;
  }
  // Laplace expansion along the first row; only reached for dim 4.
  double acc = 0.0;
  const auto n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::MatrixXd minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    }
    acc += ((j % 2 == 0) ? 1.0 : -1.0) * a(0, j) * det_small(minor);
  }
  return acc;
}

inline Eigen::MatrixXd drop_row_col(const Eigen::MatrixXd& a, Eigen::Index row, Eigen::Index col) {
  const auto n = a.rows();
  Eigen::MatrixXd out(n - 1, n - 1);
  for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
    if (r == row) continue;
    for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
      if (c == col) continue;
      out(rr, cc++) = a(r, c);
    }
    ++rr;
  }
  return out;
}

}  // namespace detail

/// Determinant through partial-pivot LU.
inline double det(const SymMatrix& m) {
  if (m.dim() == 1) return m(0, 0);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(m.matrix()).determinant();
}

/// Closed-form cofactor expansion, dim <= 4. Used as an independent check on det().
inline double det_expansion(const SymMatrix& m) {
  if (m.dim() > 4) throw Error(Errc::InvalidArgument, "det_expansion supports dim <= 4");
  return detail::det_small(m.matrix());
}

/// Eigen::SelfAdjointEigenSolver behind the contract: ascending values, orthogonal vectors.
inline EigenDecomp eig_sym(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::ConvergenceFailure, "symmetric eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/**
 * @brief Transposed cofactor matrix, M * ad(M) = det(M) * I.
 *
 * dim <= 4 uses exact cofactor expansion. Larger matrices use the spectral
 * form ad(M) = sum_k (prod_{j != k} lambda_j) q_k q_k^t, which stays accurate
 * when M is singular (where det(M) * M^{-1} is unusable). The 1x1 adjugate is [1].
 */
inline SymMatrix adjugate(const SymMatrix& m) {
  const int n = m.dim();
  if (n == 1) return SymMatrix(Eigen::MatrixXd::Ones(1, 1));
  Eigen::MatrixXd out(n, n);
  if (n <= 4) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
        // ad(M)_{ij} = cofactor_{ji}
        out(i, j) = sign * detail::det_small(detail::drop_row_col(m.matrix(), j, i));
      }
    }
    return SymMatrix(out);
  }
  const EigenDecomp e = eig_sym(m);
  Eigen::VectorXd prod_others(n);
  for (int k = 0; k < n; ++k) {
    double p = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j != k) p *= e.values(j);
    }
    prod_others(k) = p;
  }
  out = e.vectors * prod_others.asDiagonal() * e.vectors.transpose();
  return SymMatrix(out);
}

/// Rows and columns restricted to `idx` (0-based, strictly increasing, nonempty).
inline SymMatrix principal_submatrix(const SymMatrix& m, std::span<const int> idx) {
  if (idx.empty()) throw Error(Errc::IndexOutOfRange, "empty index set");
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= m.dim()) {
      throw Error(Errc::IndexOutOfRange, "index " + std::to_string(idx[k]) + " outside [0, " +
                                             std::to_string(m.dim()) + ")");
    }
    if (k > 0 && idx[k] <= idx[k - 1]) {
      throw Error(Errc::IndexOutOfRange, "index set must be strictly increasing");
    }
  }
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) out(r, c) = m(idx[r], idx[c]);
  }
  return SymMatrix(out);
}

inline bool is_psd(const SymMatrix& m, double tol = kDefaultTol) {
  return eig_sym(m).values(0) >= -tol * m.scale();
}

inline bool is_pd(const SymMatrix& m, double tol = kDefaultTol) {
  return eig_sym(m).values(0) > tol * m.scale();
}

/// Unique PSD square root; eigenvalues inside the PSD band are clamped to 0.
inline SymMatrix sqrt_psd(const SymMatrix& m, double tol = kDefaultTol) {
  const EigenDecomp e = eig_sym(m);
  if (e.values(0) < -tol * m.scale()) throw Error(Errc::NotPSD, "matrix is not positive semidefinite");
  const Eigen::VectorXd root = e.values.cwiseMax(0.0).cwiseSqrt();
  return SymMatrix(e.vectors * root.asDiagonal() * e.vectors.transpose());
}

inline Signature signature(const SymMatrix& m, double tol = kDefaultTol) {
  const EigenDecomp e = eig_sym(m);
  const double band = tol * m.scale();
  Signature s;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > band) {
      ++s.n_pos;
    } else if (e.values(i) < -band) {
      ++s.n_neg;
    } else {
      ++s.n_zero;
    }
  }
  return s;
}

/// D M D with D = diag(eps), eps_i in {+1, -1}.
inline SymMatrix conjugate_signs(const SymMatrix& m, std::span<const int> eps) {
  if (static_cast<int>(eps.size()) != m.dim()) {
    throw Error(Errc::BadSignVector, "sign vector length differs from matrix dimension");
  }
  Eigen::VectorXd d(m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    if (eps[i] != 1 && eps[i] != -1) throw Error(Errc::BadSignVector, "sign entries must be +1 or -1");
    d(i) = eps[i];
  }
  return SymMatrix(d.asDiagonal() * m.matrix() * d.asDiagonal());
}

}  // namespace simplexvol
