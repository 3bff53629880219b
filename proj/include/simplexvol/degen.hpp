#pragma once

/**
 * @brief Degeneration paths of Gram matrices and endpoint checks of the vanishing theorem.
 *
 * The extended volume vanishes exactly on closure(Z). A scan evaluates
 * classification and volume along a path; verify_theorem1 checks that the
 * endpoint's volume is statistically zero on closure(Z) and bounded away
 * from zero elsewhere.
 */

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "simplexvol/error.hpp"
#include "simplexvol/gram.hpp"
#include "simplexvol/symlin.hpp"
#include "simplexvol/volume.hpp"

namespace simplexvol {

struct PathPoint {
  double t = 0.0;
  GramMatrix a;
};

struct ScanRow {
  double t = 0.0;
  GramMatrix a;
  double det = 0.0;
  ClassificationReport flags;
  std::optional<VolumeEstimate> vol;  ///< absent outside closure(X) union closure(Y)
};

struct PathScan {
  std::vector<ScanRow> rows;
};

inline constexpr double kDefaultVolTol = 0.02;

/// Uniform grid on [0, 1]; with `refine_start`, 8 extra points dt/2, dt/4, ..., dt/256.
inline std::vector<double> path_times(int steps, bool refine_start = false) {
  if (steps < 2) throw Error(Errc::InvalidArgument, "a path needs at least 2 steps");
  std::vector<double> ts;
  const double dt = 1.0 / (steps - 1);
  ts.push_back(0.0);
  if (refine_start) {
    for (int k = 8; k >= 1; --k) ts.push_back(std::ldexp(dt, -k));
  }
  for (int i = 1; i < steps; ++i) ts.push_back(i == steps - 1 ? 1.0 : i * dt);
  return ts;
}

/// J: unit diagonal, -1 off the diagonal (the ideal-simplex matrix).
inline GramMatrix ones_target(int size) { return uniform_gram(size, -1.0); }

/// (1 - t) A + t J
inline std::vector<PathPoint> path_to_ones(const GramMatrix& a, int steps, bool refine_start = false) {
  const Eigen::MatrixXd j = ones_target(a.size()).matrix();
  std::vector<PathPoint> out;
  for (double t : path_times(steps, refine_start)) {
    out.push_back({t, GramMatrix((1.0 - t) * a.matrix() + t * j)});
  }
  return out;
}

/// (A + t lambda I) / (1 + t lambda), -lambda the unique negative eigenvalue of A.
inline std::vector<PathPoint> path_eigen_shift(const GramMatrix& a, int steps, bool refine_start = false,
                                               double tol = kDefaultTol) {
  const EigenDecomp e = eig_sym(a.sym());
  const double band = tol * a.sym().scale();
  int negatives = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) negatives += e.values(i) < -band ? 1 : 0;
  if (negatives == 0) throw Error(Errc::NoNegativeEigenvalue, "matrix has no negative eigenvalue");
  if (negatives > 1) throw Error(Errc::MultipleNegativeEigenvalues, "matrix has several negative eigenvalues");
  const double lambda = -e.values(0);
  const auto m = a.size();
  std::vector<PathPoint> out;
  for (double t : path_times(steps, refine_start)) {
    Eigen::MatrixXd b = (a.matrix() + t * lambda * Eigen::MatrixXd::Identity(m, m)) / (1.0 + t * lambda);
    out.push_back({t, GramMatrix(b)});
  }
  return out;
}

/// (1 - t) A0 + t A1
inline std::vector<PathPoint> path_linear(const GramMatrix& a0, const GramMatrix& a1, int steps,
                                          bool refine_start = false) {
  if (a0.size() != a1.size()) throw Error(Errc::SizeMismatch, "path endpoints differ in size");
  std::vector<PathPoint> out;
  for (double t : path_times(steps, refine_start)) {
    out.push_back({t, GramMatrix((1.0 - t) * a0.matrix() + t * a1.matrix())});
  }
  return out;
}

/**
 * @brief Classification and extended volume at every path point.
 *
 * Every row uses the same seed (common random numbers), so neighbouring
 * Monte Carlo values are correlated and the scan is smooth in t.
 */
inline PathScan scan(const std::vector<PathPoint>& path, const VolumeBudget& budget, std::uint64_t seed,
                     double tol = kDefaultTol) {
  PathScan s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0 && !(path[i].t > path[i - 1].t)) {
      throw Error(Errc::InvalidArgument, "path times must be strictly increasing");
    }
    const GramMatrix& a = path[i].a;
    ScanRow row{path[i].t, a, det(a.sym()), classify_full(a, tol), std::nullopt};
    if (row.flags.in_Xbar || row.flags.in_Ybar) {
      try {
        row.vol = volume_extended(a, budget, seed, tol);
      } catch (const Error& e) {
        if (e.code() != Errc::NotInDomain && e.code() != Errc::NonConvergent) throw;
      }
    }
    s.rows.push_back(std::move(row));
  }
  return s;
}

/// Endpoint consistency: volume <= vol_tol + 3 sigma on closure(Z), > vol_tol + 3 sigma elsewhere.
inline bool verify_theorem1(const PathScan& s, double vol_tol = kDefaultVolTol) {
  if (s.rows.empty()) throw Error(Errc::EndpointOutOfDomain, "empty scan");
  const ScanRow& last = s.rows.back();
  if (!(last.flags.in_Xbar || last.flags.in_Ybar) || !last.vol) {
    throw Error(Errc::EndpointOutOfDomain, "endpoint lies outside closure(X) union closure(Y)");
  }
  const double threshold = vol_tol + 3.0 * last.vol->std_error;
  if (last.flags.in_Zbar) return last.vol->value <= threshold;
  return last.vol->value > threshold;
}

}  // namespace simplexvol
