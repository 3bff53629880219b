#pragma once

/**
 * @brief Simplex reconstruction from angle Gram matrices.
 *
 * Spherical simplexes live on the unit sphere S^n in R^{n+1}, hyperbolic ones
 * in the hyperboloid model H^n of Minkowski space R^{n,1}, and Euclidean ones
 * in R^n. Outward unit normals v_i and vertices u_j satisfy <u_j, v_i> = 0 (or
 * = 1 for the Euclidean tangential construction) for i != j. Representatives
 * are gauge-fixed: eigen-ordered factors, future-pointing timelike vectors,
 * incenter at e_{n+1}.
 */

#include <cmath>
#include <numbers>
#include <utility>

#include <Eigen/Dense>

#include "simplexvol/error.hpp"
#include "simplexvol/gram.hpp"
#include "simplexvol/normals.hpp"
#include "simplexvol/symlin.hpp"

namespace simplexvol {

/// A point of R^{n,1}; the last coordinate is timelike.
struct MinkowskiVector {
  Eigen::VectorXd coords;

  int size() const { return static_cast<int>(coords.size()); }
  double time() const { return coords(coords.size() - 1); }

  static MinkowskiVector basis(int size, int i) {
    return {Eigen::VectorXd::Unit(size, i)};
  }
};

inline double minkowski_dot(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() < 1) throw Error(Errc::DimMismatch, "Minkowski vectors differ in size");
  const auto n = x.size() - 1;
  return x.head(n).dot(y.head(n)) - x(n) * y(n);
}

inline double minkowski_dot(const MinkowskiVector& x, const MinkowskiVector& y) {
  return minkowski_dot(x.coords, y.coords);
}

/// diag(1, ..., 1, -1)
inline Eigen::MatrixXd minkowski_metric(int size) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(size, size);
  s(size - 1, size - 1) = -1.0;
  return s;
}

/// n+1 unit spacelike vectors in R^{n,1}, stored as columns.
class DeSitterFamily {
 public:
  explicit DeSitterFamily(Eigen::MatrixXd vectors) : v_(std::move(vectors)) {
    if (v_.rows() < 2 || v_.cols() != v_.rows()) {
      throw Error(Errc::DimMismatch, "de Sitter family needs n+1 vectors in R^{n,1}");
    }
    for (Eigen::Index i = 0; i < v_.cols(); ++i) {
      if (std::abs(minkowski_dot(v_.col(i), v_.col(i)) - 1.0) > 1e-10) {
        throw Error(Errc::InvalidArgument, "de Sitter vectors need <v,v> = 1");
      }
    }
  }

  int n() const { return static_cast<int>(v_.rows()) - 1; }
  int count() const { return static_cast<int>(v_.cols()); }
  const Eigen::MatrixXd& vectors() const { return v_; }
  MinkowskiVector vector(int i) const { return {v_.col(i)}; }

  /// [<v_i, v_j>]
  Eigen::MatrixXd minkowski_gram() const {
    return v_.transpose() * minkowski_metric(static_cast<int>(v_.rows())) * v_;
  }

 private:
  Eigen::MatrixXd v_;
};

enum class Space { Spherical, Hyperbolic, Euclidean };

inline constexpr const char* space_name(Space s) {
  switch (s) {
    case Space::Spherical: return "spherical";
    case Space::Hyperbolic: return "hyperbolic";
    case Space::Euclidean: return "euclidean";
  }
  return "?";
}

/// Vertices as columns: unit vectors of R^{n+1}, hyperboloid points, or points of R^n.
class Simplex {
 public:
  Simplex(Space space, Eigen::MatrixXd vertices) : space_(space), u_(std::move(vertices)) { validate(); }

  Space space() const { return space_; }
  const Eigen::MatrixXd& vertices() const { return u_; }
  int n() const { return static_cast<int>(u_.cols()) - 1; }

  /// Square matrix whose invertibility expresses vertex independence.
  Eigen::MatrixXd lifted() const {
    if (space_ != Space::Euclidean) return u_;
    Eigen::MatrixXd l(u_.rows() + 1, u_.cols());
    l.topRows(u_.rows()) = u_;
    l.row(u_.rows()).setOnes();
    return l;
  }

 private:
  void validate() const {
    const auto count = u_.cols();
    constexpr double eps = 1e-9;
    switch (space_) {
      case Space::Spherical:
        if (u_.rows() != count) throw Error(Errc::DimMismatch, "spherical vertices need n+1 coordinates");
        for (Eigen::Index j = 0; j < count; ++j) {
          if (std::abs(u_.col(j).norm() - 1.0) > eps) throw Error(Errc::DegenerateSimplex, "vertex off the sphere");
        }
        break;
      case Space::Hyperbolic:
        if (u_.rows() != count) throw Error(Errc::DimMismatch, "hyperbolic vertices need n+1 coordinates");
        for (Eigen::Index j = 0; j < count; ++j) {
          const double q = minkowski_dot(u_.col(j), u_.col(j));
          if (std::abs(q + 1.0) > eps * (1.0 + u_.col(j).squaredNorm()) || u_(count - 1, j) <= 0) {
            throw Error(Errc::DegenerateSimplex, "vertex off the upper hyperboloid sheet");
          }
        }
        break;
      case Space::Euclidean:
        if (u_.rows() + 1 != count) throw Error(Errc::DimMismatch, "Euclidean vertices need n coordinates");
        break;
    }
    if (std::abs(lifted().determinant()) <= 1e-300) {
      throw Error(Errc::DegenerateSimplex, "vertices are not independent");
    }
  }

 private:
  Space space_;
  Eigen::MatrixXd u_;
};

namespace detail {

/// Columns of `m` solve m_cols^t * metric * x = rhs_j; throws when singular.
inline Eigen::MatrixXd solve_dual(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs, Errc on_fail) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs);
  if (!lu.isInvertible()) throw Error(on_fail, "singular linear system");
  return lu.solve(rhs);
}

inline Eigen::VectorXd gauge_sign(Eigen::VectorXd q) {
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (std::abs(q(i)) > 1e-12) {
      if (q(i) < 0) q = -q;
      break;
    }
  }
  return q;
}

/// Minkowski-dual vectors w_j with <w_j, v_i> = -delta_ij.
inline Eigen::MatrixXd minkowski_dual(const Eigen::MatrixXd& v, Errc on_fail) {
  const auto size = static_cast<int>(v.rows());
  const Eigen::MatrixXd lhs = v.transpose() * minkowski_metric(size);
  return solve_dual(lhs, -Eigen::MatrixXd::Identity(v.cols(), v.cols()), on_fail);
}

}  // namespace detail

/**
 * @brief Normals of a hyperbolic simplex from its Gram matrix.
 *
 * A = Q diag(lambda) Q^t has signature (n, 1); coordinate k of v_i is
 * sqrt(|lambda_k|) Q_ik with positive eigenvalues in descending order first
 * and the negative one last, so [<v_i, v_j>] = A. The family is reflected in
 * time if needed so that the simplex lies on the upper sheet.
 */
inline DeSitterFamily hyperbolic_normals_from_gram(const GramMatrix& a, double tol = kDefaultTol) {
  if (!classify_exact(a, tol).in_Y) throw Error(Errc::NotHyperbolicGram, "matrix is not in Y");
  const int m = a.size();
  const EigenDecomp e = eig_sym(a.sym());
  Eigen::MatrixXd v(m, m);
  for (int k = 0; k < m - 1; ++k) {
    const int col = m - 1 - k;
    v.row(k) = std::sqrt(e.values(col)) * detail::gauge_sign(e.vectors.col(col)).transpose();
  }
  v.row(m - 1) = std::sqrt(-e.values(0)) * detail::gauge_sign(e.vectors.col(0)).transpose();
  // Vertices are -w_j for the Minkowski dual w; they must be future-pointing.
  const Eigen::MatrixXd w = detail::minkowski_dual(v, Errc::NotHyperbolicGram);
  if (w(m - 1, 0) < 0) v.row(m - 1) *= -1.0;
  // Snap <v_i, v_i> = 1 against rounding.
  for (int i = 0; i < m; ++i) v.col(i) /= std::sqrt(minkowski_dot(v.col(i), v.col(i)));
  return DeSitterFamily(v);
}

/// u_j with <u_j, v_i> = 0 (i != j), <u_j, u_j> = -1, future-pointing, <u_j, v_j> < 0.
inline Simplex vertices_from_normals(const DeSitterFamily& f) {
  const int m = f.count();
  const Eigen::MatrixXd w = detail::minkowski_dual(f.vectors(), Errc::NoTimelikeSolution);
  Eigen::MatrixXd u(m, m);
  for (int j = 0; j < m; ++j) {
    const double q = minkowski_dot(w.col(j), w.col(j));
    if (q >= 0) throw Error(Errc::NoTimelikeSolution, "vertex direction is not timelike");
    if (w(m - 1, j) <= 0) throw Error(Errc::NoTimelikeSolution, "vertex is not on the upper sheet");
    u.col(j) = w.col(j) / std::sqrt(-q);
  }
  return Simplex(Space::Hyperbolic, u);
}

/// Normals are the columns of sqrt(A); u_j . v_i = 0 (i != j), |u_j| = 1, u_j . v_j < 0.
inline Simplex spherical_simplex_from_gram(const GramMatrix& a, double tol = kDefaultTol) {
  if (!classify_exact(a, tol).in_X) throw Error(Errc::NotSphericalGram, "matrix is not in X");
  const Eigen::MatrixXd v = sqrt_psd(a.sym(), tol).matrix();
  const auto m = v.cols();
  Eigen::MatrixXd u = detail::solve_dual(v.transpose(), -Eigen::MatrixXd::Identity(m, m), Errc::NotSphericalGram);
  for (Eigen::Index j = 0; j < m; ++j) u.col(j).normalize();
  return Simplex(Space::Spherical, u);
}

/// Simplex { x : v_i . x <= 1 } circumscribing the unit ball; v from vectors_from_psd_gram(A, n).
inline Simplex euclidean_simplex_from_gram(const GramMatrix& a, double tol = kDefaultTol) {
  if (!classify_exact(a, tol).in_Z) throw Error(Errc::NotEuclideanGram, "matrix is not in Z");
  const int n = a.n();
  const NormalFamily f = vectors_from_psd_gram(a, n, tol);
  const Eigen::MatrixXd& v = f.vectors();
  Eigen::MatrixXd u(n, n + 1);
  for (int j = 0; j <= n; ++j) {
    Eigen::MatrixXd lhs(n, n);
    for (int i = 0, r = 0; i <= n; ++i) {
      if (i != j) lhs.row(r++) = v.col(i).transpose();
    }
    u.col(j) = detail::solve_dual(lhs, Eigen::VectorXd::Ones(n), Errc::NotEuclideanGram);
  }
  return Simplex(Space::Euclidean, u);
}

/// Outward unit normals recomputed from the vertices, as columns.
inline Eigen::MatrixXd outward_normals(const Simplex& s) {
  const Eigen::MatrixXd& u = s.vertices();
  const auto m = u.cols();
  const Eigen::MatrixXd neg_id = -Eigen::MatrixXd::Identity(m, m);
  switch (s.space()) {
    case Space::Spherical: {
      Eigen::MatrixXd nv = detail::solve_dual(u.transpose(), neg_id, Errc::DegenerateSimplex);
      for (Eigen::Index i = 0; i < m; ++i) nv.col(i).normalize();
      return nv;
    }
    case Space::Hyperbolic: {
      const Eigen::MatrixXd lhs = u.transpose() * minkowski_metric(static_cast<int>(u.rows()));
      Eigen::MatrixXd nv = detail::solve_dual(lhs, neg_id, Errc::DegenerateSimplex);
      for (Eigen::Index i = 0; i < m; ++i) {
        const double q = minkowski_dot(nv.col(i), nv.col(i));
        if (q <= 0) throw Error(Errc::DegenerateSimplex, "face normal is not spacelike");
        nv.col(i) /= std::sqrt(q);
      }
      return nv;
    }
    case Space::Euclidean: {
      // Rows (u_j^t, 1); solution (n_i, c_i) has n_i . u_j + c_i = -delta_ij.
      const Eigen::MatrixXd lhs = s.lifted().transpose();
      const Eigen::MatrixXd sol = detail::solve_dual(lhs, neg_id, Errc::DegenerateSimplex);
      Eigen::MatrixXd nv = sol.topRows(u.rows());
      for (Eigen::Index i = 0; i < m; ++i) nv.col(i).normalize();
      return nv;
    }
  }
  throw Error(Errc::InvalidArgument, "unknown space");
}

/// theta_ij = arccos(-<v_i, v_j>) from recomputed normals; diagonal pi.
inline Eigen::MatrixXd dihedral_angles(const Simplex& s) {
  const Eigen::MatrixXd nv = outward_normals(s);
  const auto m = nv.cols();
  Eigen::MatrixXd g = s.space() == Space::Hyperbolic
                          ? Eigen::MatrixXd(nv.transpose() * minkowski_metric(static_cast<int>(nv.rows())) * nv)
                          : Eigen::MatrixXd(nv.transpose() * nv);
  Eigen::MatrixXd theta(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      theta(i, j) = i == j ? std::numbers::pi : std::acos(std::clamp(-g(i, j), -1.0, 1.0));
    }
  }
  return theta;
}

struct Incenter {
  MinkowskiVector center;
  double radius = 0.0;
  double pairing = 0.0;  ///< s = -<c, v_i>, common to all faces; radius = asinh(s)
};

/// Point c on H^n with <c, v_i> = -s for every i; inradius asinh(s).
inline Incenter incenter_and_radius(const DeSitterFamily& f) {
  const int size = f.count();
  const Eigen::MatrixXd lhs = f.vectors().transpose() * minkowski_metric(size);
  const Eigen::VectorXd c0 = detail::solve_dual(lhs, -Eigen::VectorXd::Ones(size), Errc::SingularNormalMatrix);
  const double q = minkowski_dot(c0, c0);
  if (q >= 0) throw Error(Errc::SingularNormalMatrix, "equidistant point is not timelike");
  double k = 1.0 / std::sqrt(-q);
  if (c0(size - 1) < 0) k = -k;
  Incenter out;
  out.center = {k * c0};
  out.pairing = k;
  if (out.pairing <= 0) throw Error(Errc::SingularNormalMatrix, "normals do not bound a simplex around the center");
  out.radius = std::asinh(out.pairing);
  return out;
}

/**
 * @brief Lorentz transformation L with L(c) = e_{n+1}.
 *
 * Minkowski Gram-Schmidt completes c with the standard spatial axes
 * projected onto c^perp; L = S B^t S for B = [b_1, ..., b_n, c]. When c is
 * already e_{n+1} this is the identity.
 */
inline Eigen::MatrixXd lorentz_to_origin(const MinkowskiVector& c) {
  const int size = c.size();
  const int n = size - 1;
  Eigen::MatrixXd b(size, size);
  b.col(n) = c.coords;
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd x = Eigen::VectorXd::Unit(size, k);
    x += minkowski_dot(x, c.coords) * c.coords;  // <c,c> = -1
    for (int j = 0; j < k; ++j) x -= minkowski_dot(x, b.col(j)) * b.col(j);
    b.col(k) = x / std::sqrt(minkowski_dot(x, x));
  }
  const Eigen::MatrixXd s = minkowski_metric(size);
  return s * b.transpose() * s;
}

inline DeSitterFamily center_normalize(const DeSitterFamily& f) {
  const Incenter ic = incenter_and_radius(f);
  const Eigen::MatrixXd l = lorentz_to_origin(ic.center);
  Eigen::MatrixXd v = l * f.vectors();
  for (Eigen::Index i = 0; i < v.cols(); ++i) v.col(i) /= std::sqrt(minkowski_dot(v.col(i), v.col(i)));
  return DeSitterFamily(v);
}

}  // namespace simplexvol
