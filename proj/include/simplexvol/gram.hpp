#pragma once

/**
 * @brief Angle Gram matrices A = [-cos(theta_ij)] and their classification.
 *
 * X, Y and Z denote the sets of angle Gram matrices of spherical, hyperbolic
 * and Euclidean simplexes; the closures are tested with the criteria below.
 * Every "= 0", "> 0" or ">= 0" is certified against a tolerance band:
 *
 *   eigenvalue tests:   tol * (1 + ||M||_inf)
 *   det of a k x k M:   tol * (1 + ||M||_inf)^k
 *   adjugate entries:   tol * (1 + ||M||_inf)^(k-1)   (cofactors are (k-1)-minors)
 *
 * Index sets and sign vectors are 0-based in this API.
 */

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "simplexvol/error.hpp"
#include "simplexvol/symlin.hpp"

namespace simplexvol {

/// Largest matrix size for the 2^m subset and sign enumerations.
inline constexpr int kMaxEnumerationSize = 20;

/// Symmetric matrix with unit diagonal. n() is the simplex dimension.
class GramMatrix {
 public:
  /// Diagonal entries within 1e-12 of 1 are snapped to exactly 1; anything else is rejected.
  explicit GramMatrix(const SymMatrix& s) : inner_(snap(s)) {}
  explicit GramMatrix(const Eigen::MatrixXd& m) : GramMatrix(SymMatrix(m)) {}

  const SymMatrix& sym() const { return inner_; }
  const Eigen::MatrixXd& matrix() const { return inner_.matrix(); }
  int size() const { return inner_.dim(); }
  int n() const { return inner_.dim() - 1; }
  double operator()(int i, int j) const { return inner_(i, j); }

  friend bool operator==(const GramMatrix& a, const GramMatrix& b) { return a.inner_ == b.inner_; }

 private:
  static SymMatrix snap(const SymMatrix& s) {
    Eigen::MatrixXd m = s.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, i) - 1.0) > 1e-12) {
        throw Error(Errc::InvalidArgument, "Gram matrix diagonal must equal 1");
      }
      m(i, i) = 1.0;
    }
    return SymMatrix(m);
  }

  SymMatrix inner_;
};

/// Gram matrix with every off-diagonal entry equal to `a`.
inline GramMatrix uniform_gram(int size, double a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(size, size, a);
  m.diagonal().setOnes();
  return GramMatrix(m);
}

struct InteriorFlags {
  bool in_X = false;
  bool in_Y = false;
  bool in_Z = false;
};

struct ZbarResult {
  bool member = false;
  std::optional<std::vector<int>> witness;  ///< principal submatrix B
};

struct XbarResult {
  bool member = false;
  std::optional<std::vector<int>> witness;  ///< sign vector D; empty when A is already in X
};

struct ClassificationReport {
  bool in_X = false;
  bool in_Y = false;
  bool in_Z = false;
  bool in_Xbar = false;
  bool in_Ybar = false;
  bool in_Zbar = false;
  std::optional<std::vector<int>> witness_D;
  std::optional<std::vector<int>> witness_B;
  double det_A = 0.0;
  double tol_used = kDefaultTol;

  bool flags_equal(const ClassificationReport& o) const {
    return in_X == o.in_X && in_Y == o.in_Y && in_Z == o.in_Z && in_Xbar == o.in_Xbar &&
           in_Ybar == o.in_Ybar && in_Zbar == o.in_Zbar;
  }

  /// Inclusion and exclusivity relations every report must satisfy.
  bool invariants_hold() const {
    if (in_X && !in_Xbar) return false;
    if (in_Y && !in_Ybar) return false;
    if (in_Z && !in_Zbar) return false;
    if (in_Zbar && !(in_Xbar && in_Ybar)) return false;
    return int(in_X) + int(in_Y) + int(in_Z) <= 1;
  }
};

inline double det_band(const SymMatrix& m, double tol) { return tol * std::pow(m.scale(), m.dim()); }
inline double adjugate_band(const SymMatrix& m, double tol) {
  return tol * std::pow(m.scale(), m.dim() - 1);
}

/// theta symmetric, diagonal pi, off-diagonal in [0, pi] (all within 1e-12).
inline GramMatrix from_angles(const Eigen::MatrixXd& theta) {
  constexpr double eps = 1e-12;
  if (theta.rows() == 0 || theta.rows() != theta.cols()) {
    throw Error(Errc::BadAngles, "angle matrix must be square and nonempty");
  }
  const auto m = theta.rows();
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double t = theta(i, j);
      if (!std::isfinite(t)) throw Error(Errc::BadAngles, "angles must be finite");
      if (std::abs(t - theta(j, i)) > eps) throw Error(Errc::BadAngles, "angle matrix is not symmetric");
      if (i == j) {
        if (std::abs(t - std::numbers::pi) > eps) throw Error(Errc::BadAngles, "diagonal angles must equal pi");
        a(i, j) = 1.0;
      } else {
        if (t < -eps || t > std::numbers::pi + eps) {
          throw Error(Errc::BadAngles, "off-diagonal angles must lie in [0, pi]");
        }
        a(i, j) = -std::cos(std::clamp(t, 0.0, std::numbers::pi));
      }
    }
  }
  return GramMatrix(a);
}

inline Eigen::MatrixXd to_angles(const GramMatrix& a, double tol = kDefaultTol) {
  const int m = a.size();
  Eigen::MatrixXd theta(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) {
        theta(i, j) = std::numbers::pi;
        continue;
      }
      const double x = a(i, j);
      if (std::abs(x) > 1.0 + tol) {
        throw Error(Errc::EntryOutOfRange, "|a_ij| > 1: no dihedral angle corresponds");
      }
      theta(i, j) = std::acos(-std::clamp(x, -1.0, 1.0));
    }
  }
  return theta;
}

namespace detail {

inline bool entries_in_range(const GramMatrix& a, double tol) {
  return (a.matrix().cwiseAbs().array() <= 1.0 + tol).all();
}

/// Advances `c` to the next k-subset of {0..m-1} in lexicographic order.
inline bool next_combination(std::vector<int>& c, int m) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[i] == m - k + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  return true;
}

inline std::vector<int> drop_index(int m, int skip) {
  std::vector<int> idx;
  for (int i = 0; i < m; ++i) {
    if (i != skip) idx.push_back(i);
  }
  return idx;
}

/// Every principal (m-1)x(m-1) submatrix passes `pred`.
template <class Pred>
bool all_maximal_minors(const GramMatrix& a, Pred pred) {
  const int m = a.size();
  if (m == 1) return true;
  for (int skip = 0; skip < m; ++skip) {
    const auto idx = drop_index(m, skip);
    if (!pred(principal_submatrix(a.sym(), idx))) return false;
  }
  return true;
}

/// Singular principal submatrix B (size >= 2) with nonzero adjugate, cached for
/// sign-conjugation tests: ad(DBD) = D ad(B) D.
struct SingularMinor {
  std::vector<int> idx;
  Eigen::MatrixXd adj;
  double band = 0.0;
};

/// Candidates in (size ascending, lexicographic) order.
inline std::vector<SingularMinor> singular_minors(const GramMatrix& a, double tol) {
  std::vector<SingularMinor> out;
  const int m = a.size();
  for (int k = 2; k <= m; ++k) {
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) c[i] = i;
    do {
      const SymMatrix b = principal_submatrix(a.sym(), c);
      if (std::abs(det(b)) > det_band(b, tol)) continue;
      const SymMatrix adj = adjugate(b);
      const double band = adjugate_band(b, tol);
      if (adj.matrix().cwiseAbs().maxCoeff() <= band) continue;
      out.push_back({c, adj.matrix(), band});
    } while (next_combination(c, m));
  }
  return out;
}

/// First cached minor whose sign-conjugated adjugate is entrywise >= -band.
inline const SingularMinor* first_nonneg_minor(const std::vector<SingularMinor>& minors,
                                               const std::vector<int>& eps) {
  for (const auto& sm : minors) {
    bool ok = true;
    const auto k = static_cast<Eigen::Index>(sm.idx.size());
    for (Eigen::Index r = 0; r < k && ok; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) {
        const double v = eps[sm.idx[r]] * eps[sm.idx[c]] * sm.adj(r, c);
        if (v < -sm.band) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return &sm;
  }
  return nullptr;
}

inline void check_size(const GramMatrix& a) {
  if (a.size() > kMaxEnumerationSize) {
    throw Error(Errc::TooLarge, "matrix size " + std::to_string(a.size()) +
                                    " exceeds the enumeration limit of " +
                                    std::to_string(kMaxEnumerationSize));
  }
}

}  // namespace detail

/**
 * @brief Interior membership.
 *
 * in_X: A positive definite. in_Z: det(A) = 0, ad(A) > 0, every principal
 * n x n submatrix positive definite. in_Y: same with det(A) < 0. The three
 * cases are tested independently; in_Z additionally requires A to be PSD and
 * not in X, which keeps the flags mutually exclusive when det(A) sits inside
 * the zero band.
 */
inline InteriorFlags classify_exact(const GramMatrix& a, double tol = kDefaultTol) {
  InteriorFlags f;
  if (!detail::entries_in_range(a, tol)) return f;
  const SymMatrix& s = a.sym();
  f.in_X = is_pd(s, tol);
  const double d = det(s);
  const double dband = det_band(s, tol);
  const auto adj = adjugate(s).matrix();
  const bool adj_positive = (adj.array() > adjugate_band(s, tol)).all();
  if (!adj_positive) return f;
  const bool minors_pd = detail::all_maximal_minors(a, [tol](const SymMatrix& b) { return is_pd(b, tol); });
  if (!minors_pd) return f;
  if (d < -dband) {
    f.in_Y = true;
  } else if (!f.in_X && std::abs(d) <= dband && is_psd(s, tol)) {
    f.in_Z = true;
  }
  return f;
}

/// det(A) = 0, A PSD, and some principal B (size >= 2) with det(B) = 0, ad(B) >= 0, ad(B) != 0.
inline ZbarResult in_Zbar(const GramMatrix& a, double tol = kDefaultTol) {
  detail::check_size(a);
  if (!detail::entries_in_range(a, tol)) return {};
  const SymMatrix& s = a.sym();
  if (std::abs(det(s)) > det_band(s, tol) || !is_psd(s, tol)) return {};
  const auto minors = detail::singular_minors(a, tol);
  const std::vector<int> plus(a.size(), 1);
  if (const auto* sm = detail::first_nonneg_minor(minors, plus)) return {true, sm->idx};
  return {};
}

/**
 * @brief Closure of X: A in X, or D A D in closure(Z) for some D = diag(eps).
 *
 * Sign vectors are enumerated with eps_0 = +1 (D and -D act identically),
 * in increasing bitmask order where bit j set means eps_{j+1} = -1. A PSD
 * pre-filter runs first since conjugation preserves the spectrum.
 */
inline XbarResult in_Xbar(const GramMatrix& a, double tol = kDefaultTol) {
  detail::check_size(a);
  if (!detail::entries_in_range(a, tol)) return {};
  const SymMatrix& s = a.sym();
  if (is_pd(s, tol)) return {true, std::nullopt};
  if (!is_psd(s, tol) || std::abs(det(s)) > det_band(s, tol)) return {};
  const auto minors = detail::singular_minors(a, tol);
  const int m = a.size();
  const unsigned long count = 1ul << (m - 1);
  std::vector<int> eps(m, 1);
  for (unsigned long mask = 0; mask < count; ++mask) {
    for (int j = 1; j < m; ++j) eps[j] = ((mask >> (j - 1)) & 1ul) ? -1 : 1;
    if (detail::first_nonneg_minor(minors, eps)) return {true, eps};
  }
  return {};
}

/// A in closure(Z), or det(A) < 0, ad(A) >= 0 and all principal n x n submatrices PSD.
inline bool in_Ybar(const GramMatrix& a, double tol = kDefaultTol) {
  if (in_Zbar(a, tol).member) return true;
  if (!detail::entries_in_range(a, tol)) return false;
  const SymMatrix& s = a.sym();
  if (det(s) >= -det_band(s, tol)) return false;
  if ((adjugate(s).matrix().array() < -adjugate_band(s, tol)).any()) return false;
  return detail::all_maximal_minors(a, [tol](const SymMatrix& b) { return is_psd(b, tol); });
}

inline ClassificationReport classify_full(const GramMatrix& a, double tol = kDefaultTol) {
  detail::check_size(a);
  ClassificationReport r;
  r.tol_used = tol;
  r.det_A = det(a.sym());
  const InteriorFlags f = classify_exact(a, tol);
  r.in_X = f.in_X;
  r.in_Y = f.in_Y;
  r.in_Z = f.in_Z;
  const ZbarResult z = in_Zbar(a, tol);
  r.in_Zbar = z.member;
  r.witness_B = z.witness;
  const XbarResult x = in_Xbar(a, tol);
  r.in_Xbar = x.member;
  r.witness_D = x.witness;
  r.in_Ybar = in_Ybar(a, tol);
  if (!r.invariants_hold()) {
    // Structural: each flag's test implies the tests of the sets containing it.
    throw std::logic_error("classification report violates set inclusions");
  }
  return r;
}

}  // namespace simplexvol
