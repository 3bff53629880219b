#pragma once

/**
 * @brief Volume of spherical and hyperbolic simplexes as a function of the angle Gram matrix.
 *
 * Two integral representations, with mu_k = Gamma((k+1)/2) / 2:
 *
 *   adjugate form  V(A) = mu_n^{-1} sqrt|det ad(A)| * int_{x >= 0} exp(-x^t ad(A) x) dx
 *   orthant form   V(A) = mu_n^{-1} * int_{R^{n+1}} chi(sqrt(A) x >= 0) exp(-x^t x) dx
 *
 * The orthant form holds on all PSD unidiagonal matrices and is estimated as
 * an orthant probability of Gaussians with variance 1/2. The adjugate form
 * holds for nondegenerate spherical matrices and for hyperbolic closure
 * matrices with det(A) < 0. Writing x = t s with s on the standard simplex and
 * integrating t in closed form gives
 *
 *   int_{x >= 0} exp(-x^t M x) dx = mu_n * int_simplex (s^t M s)^{-(n+1)/2} ds,
 *
 * which both the quadrature and the importance sampler use.
 */

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <Eigen/Dense>

#include "simplexvol/error.hpp"
#include "simplexvol/gram.hpp"
#include "simplexvol/rng.hpp"
#include "simplexvol/symlin.hpp"

namespace simplexvol {

enum class VolumeMethod { OrthantMC, OrthantQuad, AdjugateMC, AdjugateQuad, ClosedForm2D, ExactZero };

inline constexpr std::string_view method_name(VolumeMethod m) {
  switch (m) {
    case VolumeMethod::OrthantMC: return "OrthantMC";
    case VolumeMethod::OrthantQuad: return "OrthantQuad";
    case VolumeMethod::AdjugateMC: return "AdjugateMC";
    case VolumeMethod::AdjugateQuad: return "AdjugateQuad";
    case VolumeMethod::ClosedForm2D: return "ClosedForm2D";
    case VolumeMethod::ExactZero: return "ExactZero";
  }
  return "?";
}

enum class MethodChoice { Auto, MC, Quad };

/// Largest n for which quadrature is offered (nested 1-D rules over the n-simplex).
inline constexpr int kMaxQuadDim = 3;

struct VolumeBudget {
  std::uint64_t samples = 1'000'000;
  double quad_tol = 1e-10;
  MethodChoice method = MethodChoice::Auto;
  unsigned workers = 0;  ///< 0 = hardware concurrency; never affects results
};

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  VolumeMethod method = VolumeMethod::ExactZero;
  std::uint64_t samples = 0;  ///< Monte Carlo sample count, 0 otherwise
  double quad_tol = 0.0;      ///< quadrature tolerance, 0 otherwise
  std::optional<std::uint64_t> seed;

  friend bool operator==(const VolumeEstimate&, const VolumeEstimate&) = default;
};

namespace fault {
/// Multiplier applied to every mu_k. Only the selftest negative control changes it.
inline double mu_scale = 1.0;
}  // namespace fault

/// mu_k = int_0^inf x^k exp(-x^2) dx = Gamma((k+1)/2) / 2
inline double mu(int k) {
  if (k < 0) throw Error(Errc::InvalidArgument, "mu(k) needs k >= 0");
  return fault::mu_scale * 0.5 * std::exp(std::lgamma(0.5 * (k + 1)));
}

namespace detail {

/// int over the standard n-simplex of (s^t M s)^{-(n+1)/2}, by nested tanh-sinh rules.
class SimplexIntegral {
 public:
  SimplexIntegral(const Eigen::MatrixXd& m, double tol)
      : m_(m), dim_(static_cast<int>(m.rows())), tol_(tol), s_(m.rows()) {
    // One rule per nesting level; a rule may grow its abscissa tables while integrating.
    for (int k = 0; k + 1 < dim_; ++k) rules_.emplace_back(15);
  }

  double run() {
    max_error_ = 0.0;
    const double v = level(0, 1.0);
    return v;
  }

  double max_relative_error() const { return max_error_; }

 private:
  double level(int k, double remaining) {
    if (k == dim_ - 1) {
      s_(k) = remaining;
      const double q = s_.dot(m_ * s_);
      const double f = std::pow(q, -0.5 * dim_);
      // The integrand is integrable where q vanishes (ideal vertices); the
      // rule's extreme abscissae can still round q to 0.
      return std::isfinite(f) ? f : 0.0;
    }
    if (remaining <= 0.0) return 0.0;
    auto f = [this, k, remaining](double t, double tc) {
      s_(k) = t;
      // On the right half tc = remaining - t without cancellation.
      const double rest = tc > 0 ? tc : remaining - t;
      return level(k + 1, rest);
    };
    double err = 0.0;
    double l1 = 0.0;
    const double v = rules_[k].integrate(f, 0.0, remaining, tol_, &err, &l1);
    // Inner rules on vanishing sub-intervals report meaningless ratios; the
    // outer estimate already absorbs their noise.
    if (k == 0 && l1 > 0) max_error_ = err / l1;
    return v;
  }

  Eigen::MatrixXd m_;
  int dim_;
  double tol_;
  Eigen::VectorXd s_;
  std::vector<boost::math::quadrature::tanh_sinh<double>> rules_;
  double max_error_ = 0.0;
};

inline double simplex_integral(const Eigen::MatrixXd& m, double tol) {
  SimplexIntegral integ(m, tol);
  const double v = integ.run();
  if (!std::isfinite(v) || integ.max_relative_error() > std::max(1e-6, 100 * tol)) {
    throw Error(Errc::NonConvergent, "quadrature did not reach the requested accuracy");
  }
  return v;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  /// Chan et al. pairwise combination.
  void merge(const Moments& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(count + o.count);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.count) / n;
    m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / n;
    count += o.count;
  }
};

inline void require_samples(std::uint64_t samples) {
  if (samples < 2) throw Error(Errc::InvalidArgument, "Monte Carlo needs at least 2 samples");
}

inline bool det_in_band(const GramMatrix& a, double tol) {
  return std::abs(det(a.sym())) <= det_band(a.sym(), tol);
}

}  // namespace detail

/**
 * @brief Orthant form by Monte Carlo; valid on every PSD unidiagonal matrix.
 *
 * value = vol(S^n) * p_hat with vol(S^n) = pi^{(n+1)/2} / mu_n and p_hat the
 * fraction of samples with sqrt(A) Z >= 0, Z ~ N(0, I/2). The error is the
 * binomial standard error. Deterministic in (seed, samples).
 */
inline VolumeEstimate volume_spherical_extended(const GramMatrix& a, std::uint64_t samples, std::uint64_t seed,
                                                unsigned workers = 0, double tol = kDefaultTol) {
  detail::require_samples(samples);
  const Eigen::MatrixXd root = sqrt_psd(a.sym(), tol).matrix();
  const int m = a.size();
  const auto hits = rng::for_each_chunk<std::uint64_t>(
      samples, workers, [&](std::uint64_t chunk, std::uint64_t count) {
        rng::ChunkStream stream(seed, chunk);
        Eigen::VectorXd z(m);
        std::uint64_t h = 0;
        for (std::uint64_t i = 0; i < count; ++i) {
          for (int k = 0; k < m; ++k) z(k) = std::numbers::sqrt2 * 0.5 * stream.normal();
          if (((root * z).array() >= 0.0).all()) ++h;
        }
        return h;
      });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  const double p = static_cast<double>(total) / static_cast<double>(samples);
  const double sphere = std::pow(std::numbers::pi, 0.5 * m) / mu(m - 1);
  VolumeEstimate v;
  v.value = sphere * p;
  v.std_error = sphere * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  v.method = VolumeMethod::OrthantMC;
  v.samples = samples;
  v.seed = seed;
  return v;
}

/// Orthant form by quadrature for positive definite A, n <= 3: the orthant
/// probability of N(0, A/2) through the simplex reduction with M = A^{-1}.
inline VolumeEstimate volume_spherical_quad(const GramMatrix& a, double quad_tol = 1e-10,
                                            double tol = kDefaultTol) {
  if (!is_pd(a.sym(), tol)) throw Error(Errc::NotInDomain, "orthant quadrature needs a positive definite matrix");
  if (a.n() > kMaxQuadDim) throw Error(Errc::NotInDomain, "quadrature is limited to n <= 3");
  const Eigen::MatrixXd inv = a.matrix().inverse();
  VolumeEstimate v;
  v.value = detail::simplex_integral(inv, quad_tol) / std::sqrt(det(a.sym()));
  v.method = VolumeMethod::OrthantQuad;
  v.quad_tol = quad_tol;
  return v;
}

/**
 * @brief Adjugate form. Domain: A in X or Y, or A in closure(Y) with det(A) < 0.
 *
 * Quadrature (n <= 3): nested tanh-sinh over the simplex. Monte Carlo: draws
 * x_i ~ Exp(r_i) with r_i = sqrt(ad_ii) (1 where ad_ii is inside the band)
 * and integrates each sampled ray exactly, so the weight is
 * ((r.x)^2 / x^t ad x)^{(n+1)/2} / (n! prod r_i).
 */
inline VolumeEstimate volume_eq1(const GramMatrix& a, MethodChoice method, const VolumeBudget& budget,
                                 std::uint64_t seed, double tol = kDefaultTol) {
  const InteriorFlags f = classify_exact(a, tol);
  const bool hyperbolic_closure = !f.in_X && !f.in_Y && det(a.sym()) < -det_band(a.sym(), tol) && in_Ybar(a, tol);
  if (!f.in_X && !f.in_Y && !hyperbolic_closure) {
    throw Error(Errc::NotInDomain, "adjugate formula needs A in X, Y, or closure(Y) with det(A) < 0");
  }
  const SymMatrix adj = adjugate(a.sym());
  const double root_det = std::sqrt(std::abs(det(adj)));
  const int n = a.n();
  if (method == MethodChoice::Auto) method = n <= kMaxQuadDim ? MethodChoice::Quad : MethodChoice::MC;

  VolumeEstimate v;
  if (method == MethodChoice::Quad) {
    if (n > kMaxQuadDim) throw Error(Errc::NotInDomain, "quadrature is limited to n <= 3");
    v.value = root_det * detail::simplex_integral(adj.matrix(), budget.quad_tol);
    v.method = VolumeMethod::AdjugateQuad;
    v.quad_tol = budget.quad_tol;
    return v;
  }

  detail::require_samples(budget.samples);
  const int m = a.size();
  const double band = adjugate_band(a.sym(), tol);
  Eigen::VectorXd rate(m);
  for (int i = 0; i < m; ++i) rate(i) = adj(i, i) > band ? std::sqrt(adj(i, i)) : 1.0;
  const Eigen::MatrixXd& am = adj.matrix();
  const double half_power = 0.5 * m;
  const auto parts = rng::for_each_chunk<detail::Moments>(
      budget.samples, budget.workers, [&](std::uint64_t chunk, std::uint64_t count) {
        rng::ChunkStream stream(seed, chunk);
        Eigen::VectorXd x(m);
        detail::Moments mom;
        for (std::uint64_t i = 0; i < count; ++i) {
          for (int k = 0; k < m; ++k) x(k) = stream.exponential(rate(k));
          const double rx = rate.dot(x);
          const double q = x.dot(am * x);
          const double w = std::pow(rx * rx / q, half_power);
          mom.add(std::isfinite(w) ? w : 0.0);
        }
        return mom;
      });
  detail::Moments total;
  for (const auto& p : parts) total.merge(p);
  const double pref = root_det / (detail::factorial(n) * rate.prod());
  const double var = total.count > 1 ? total.m2 / static_cast<double>(total.count - 1) : 0.0;
  v.value = pref * total.mean;
  v.std_error = pref * std::sqrt(var / static_cast<double>(total.count));
  v.method = VolumeMethod::AdjugateMC;
  v.samples = budget.samples;
  v.seed = seed;
  return v;
}

/**
 * @brief Extended volume on closure(X) union closure(Y).
 *
 * closure(Y) with det(A) = 0 lies in closure(Z), where the extension
 * vanishes: reported as ExactZero without integrating. Otherwise closure(X)
 * uses the orthant form on A itself and closure(Y) with det(A) < 0 the
 * adjugate form. Anything else is NotInDomain.
 */
inline VolumeEstimate volume_extended(const GramMatrix& a, const VolumeBudget& budget, std::uint64_t seed,
                                      double tol = kDefaultTol) {
  const bool ybar = in_Ybar(a, tol);
  if (ybar && detail::det_in_band(a, tol)) {
    VolumeEstimate v;
    v.method = VolumeMethod::ExactZero;
    return v;
  }
  if (in_Xbar(a, tol).member) {
    if (budget.method == MethodChoice::Quad) return volume_spherical_quad(a, budget.quad_tol, tol);
    return volume_spherical_extended(a, budget.samples, seed, budget.workers, tol);
  }
  if (ybar) return volume_eq1(a, budget.method, budget, seed, tol);
  throw Error(Errc::NotInDomain, "matrix lies outside closure(X) and closure(Y)");
}

/// Angle excess (spherical) or defect (hyperbolic) of a triangle; 0 on the Euclidean boundary.
inline double volume_2d_oracle(const GramMatrix& a, double tol = kDefaultTol) {
  if (a.size() != 3) throw Error(Errc::NotTriangle, "oracle needs a 3x3 Gram matrix");
  const Eigen::MatrixXd th = to_angles(a, tol);
  const double sum = th(0, 1) + th(0, 2) + th(1, 2);
  if (is_psd(a.sym(), tol)) return std::max(0.0, sum - std::numbers::pi);
  if (in_Ybar(a, tol)) return std::numbers::pi - sum;
  throw Error(Errc::NotTriangle, "matrix is neither spherical nor hyperbolic");
}

}  // namespace simplexvol
