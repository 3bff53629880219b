#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: determinants come from the Leibniz permutation sum, definiteness
// from principal minors, and kernels from brute force over supports.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Leibniz sum over all permutations; fine up to 8x8.
inline double det(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 1.0;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  double total = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) inversions += p[i] > p[j] ? 1 : 0;
    }
    double term = inversions % 2 == 0 ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) term *= m(i, p[i]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

inline Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                                 const std::vector<int>& cols) {
  Eigen::MatrixXd s(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = m(rows[i], cols[j]);
  }
  return s;
}

inline std::vector<int> all_but(int n, int skip) {
  std::vector<int> v;
  for (int i = 0; i < n; ++i) {
    if (i != skip) v.push_back(i);
  }
  return v;
}

/// Classical adjugate from cofactors: ad(i,j) = (-1)^(i+j) det(M without row j, column i).
inline Eigen::MatrixXd adjugate(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) return Eigen::MatrixXd::Ones(1, 1);
  Eigen::MatrixXd ad(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double sign = (i + j) % 2 == 0 ? 1.0 : -1.0;
      ad(i, j) = sign * det(submatrix(m, all_but(n, j), all_but(n, i)));
    }
  }
  return ad;
}

/// Every nonempty subset of {0..n-1}, as index lists.
inline std::vector<std::vector<int>> subsets(int n) {
  std::vector<std::vector<int>> out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) s.push_back(i);
    }
    out.push_back(s);
  }
  return out;
}

/// Sylvester: all leading principal minors positive.
inline bool is_pd(const Eigen::MatrixXd& m, double eps = 1e-10) {
  for (int k = 1; k <= m.rows(); ++k) {
    if (det(m.topLeftCorner(k, k)) <= eps) return false;
  }
  return true;
}

/// All principal minors nonnegative.
inline bool is_psd(const Eigen::MatrixXd& m, double eps = 1e-10) {
  for (const auto& s : subsets(static_cast<int>(m.rows()))) {
    if (det(submatrix(m, s, s)) < -eps) return false;
  }
  return true;
}

inline bool maximal_minors_pd(const Eigen::MatrixXd& m, double eps = 1e-10) {
  const int n = static_cast<int>(m.rows());
  for (int skip = 0; skip < n; ++skip) {
    const auto idx = all_but(n, skip);
    if (!is_pd(submatrix(m, idx, idx), eps)) return false;
  }
  return true;
}

struct Flags {
  bool x = false;
  bool y = false;
  bool z = false;
};

/// Interior classes by minors: X is PD; Y and Z have ad > 0 and PD maximal minors with det < 0 or det = 0.
inline Flags classify(const Eigen::MatrixXd& a, double eps = 1e-9) {
  Flags f;
  if (is_pd(a, 0.0)) {
    f.x = true;
    return f;
  }
  if (adjugate(a).minCoeff() <= eps || !maximal_minors_pd(a, 0.0)) return f;
  const double d = det(a);
  if (d < -eps) f.y = true;
  else if (std::abs(d) <= eps) f.z = true;
  return f;
}

/// Interior angles theta_ij = acos(-a_ij).
inline double angle_sum(const Eigen::MatrixXd& a) {
  return std::acos(-a(0, 1)) + std::acos(-a(0, 2)) + std::acos(-a(1, 2));
}

/// Area of a spherical triangle (excess) or hyperbolic triangle (defect) from its angles.
inline double spherical_excess(const Eigen::MatrixXd& a) { return angle_sum(a) - std::numbers::pi; }
inline double hyperbolic_defect(const Eigen::MatrixXd& a) { return std::numbers::pi - angle_sum(a); }

inline Eigen::MatrixXd gram_from_angles(double t01, double t02, double t12) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  a(0, 1) = a(1, 0) = -std::cos(t01);
  a(0, 2) = a(2, 0) = -std::cos(t02);
  a(1, 2) = a(2, 1) = -std::cos(t12);
  return a;
}

/// Angles uniform on (0, pi)^3 conditioned on forming a spherical triangle.
template <class Rng>
Eigen::MatrixXd random_spherical_triangle(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
  for (;;) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const double pi = std::numbers::pi;
    if (a + b + c > pi && a + pi > b + c && b + pi > a + c && c + pi > a + b) return gram_from_angles(a, b, c);
  }
}

/// Angles uniform on (0, pi)^3 conditioned on a + b + c < pi (every such triple is hyperbolic).
template <class Rng>
Eigen::MatrixXd random_hyperbolic_triangle(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
  for (;;) {
    const double a = u(rng), b = u(rng), c = u(rng);
    if (a + b + c < std::numbers::pi) return gram_from_angles(a, b, c);
  }
}

/// Unit diagonal, off-diagonal entries uniform on (-1, 1).
template <class Rng>
Eigen::MatrixXd random_unidiagonal(Rng& rng, int size) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(size, size);
  for (int i = 0; i < size; ++i) {
    for (int j = i + 1; j < size; ++j) a(i, j) = a(j, i) = u(rng);
  }
  return a;
}

/// Gram matrix of `size` random unit vectors in R^size (PD almost surely).
template <class Rng>
Eigen::MatrixXd random_pd_unidiagonal(Rng& rng, int size) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd v(size, size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) v(i, j) = g(rng);
  }
  for (int j = 0; j < size; ++j) v.col(j).normalize();
  Eigen::MatrixXd a = v.transpose() * v;
  a.diagonal().setOnes();
  return a;
}

/// Rejection sampling of random unidiagonal matrices with the given minor-based class.
template <class Rng>
Eigen::MatrixXd random_in_class(Rng& rng, int size, bool want_y) {
  for (;;) {
    const Eigen::MatrixXd a = want_y ? random_unidiagonal(rng, size) : random_pd_unidiagonal(rng, size);
    const Flags f = classify(a);
    if (want_y ? f.y : f.x) return a;
  }
}

/**
 * Minimal-support nonnegative kernel by brute force: the smallest (then
 * lexicographically first) subset S whose columns have a one-dimensional
 * null space spanned by a strictly positive vector.
 */
inline std::vector<int> minimal_positive_support(const Eigen::MatrixXd& v, double tol = 1e-9) {
  const int m = static_cast<int>(v.cols());
  for (int k = 1; k <= m; ++k) {
    std::vector<bool> pick(m, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
      std::vector<int> s;
      for (int i = 0; i < m; ++i) {
        if (pick[i]) s.push_back(i);
      }
      Eigen::MatrixXd sub(v.rows(), k);
      for (int j = 0; j < k; ++j) sub.col(j) = v.col(s[j]);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub, Eigen::ComputeFullV);
      const Eigen::VectorXd sv = svd.singularValues();
      const int rank = static_cast<int>((sv.array() > tol).count());
      if (rank == k - 1) {
        Eigen::VectorXd ker = svd.matrixV().col(k - 1);
        if (ker.sum() < 0) ker = -ker;
        if (ker.minCoeff() > tol) return s;
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return {};
}

}  // namespace oracle
