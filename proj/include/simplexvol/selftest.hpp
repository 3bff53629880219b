#pragma once

/**
 * @brief Canonical example battery run by `simplexvol selftest`.
 */

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simplexvol/cli.hpp"
#include "simplexvol/degen.hpp"
#include "simplexvol/geometry.hpp"
#include "simplexvol/gram.hpp"
#include "simplexvol/normals.hpp"
#include "simplexvol/symlin.hpp"
#include "simplexvol/volume.hpp"

namespace simplexvol::selftest {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Options {
  bool corrupt_mu = false;  ///< negative control: scales mu_k by 1.01 for the duration of the run
};

namespace detail {

inline Eigen::MatrixXd mat3(double a, double b, double c, double d, double e, double f) {
  Eigen::MatrixXd m(3, 3);
  m << a, b, c, b, d, e, c, e, f;
  return m;
}

inline bool near(double x, double y, double tol) { return std::abs(x - y) <= tol; }

inline bool within_sigma(const VolumeEstimate& v, double target, double k = 3.0) {
  return std::abs(v.value - target) <= k * v.std_error;
}

template <class F>
bool throws_code(F&& f, Errc code) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

struct MuScaleGuard {
  explicit MuScaleGuard(bool on) : saved(fault::mu_scale) {
    if (on) fault::mu_scale *= 1.01;
  }
  ~MuScaleGuard() { fault::mu_scale = saved; }
  double saved;
};

}  // namespace detail

inline std::vector<Check> run(const Options& opt = {}) {
  using detail::mat3;
  using detail::near;
  constexpr double pi = std::numbers::pi;
  const detail::MuScaleGuard guard(opt.corrupt_mu);

  const GramMatrix i3 = uniform_gram(3, 0.0);
  const GramMatrix equi = uniform_gram(3, -0.5);
  const GramMatrix ideal = uniform_gram(3, -1.0);
  const GramMatrix hyp6 = uniform_gram(3, -std::sqrt(3.0) / 2.0);
  const GramMatrix pair_pos(mat3(1, 1, 0, 1, 0, 1));
  const GramMatrix pair_neg(mat3(1, -1, 0, 1, 0, 1));
  const double s32 = std::sqrt(3.0) / 2.0;

  std::vector<std::pair<std::string, std::function<bool()>>> cases = {
      {"det_identity", [&] { return near(det(i3.sym()), 1.0, 1e-12); }},
      {"det_ideal", [&] { return near(det(ideal.sym()), -4.0, 1e-12); }},
      {"det_equilateral", [&] { return near(det(equi.sym()), 0.0, 1e-12); }},
      {"adjugate_ideal",
       [&] { return (adjugate(ideal.sym()).matrix() - mat3(0, 2, 2, 0, 2, 0)).norm() < 1e-12; }},
      {"eig_rank_one",
       [&] {
         const EigenDecomp e = eig_sym(SymMatrix(Eigen::MatrixXd::Ones(2, 2)));
         return near(e.values(0), 0.0, 1e-12) && near(e.values(1), 2.0, 1e-12);
       }},
      {"psd_equilateral", [&] { return is_psd(equi.sym()) && !is_pd(equi.sym()); }},
      {"sqrt_psd_projector",
       [&] {
         const Eigen::MatrixXd r = sqrt_psd(SymMatrix(Eigen::MatrixXd::Ones(2, 2))).matrix();
         return (r - Eigen::MatrixXd::Ones(2, 2) / std::sqrt(2.0)).norm() < 1e-12;
       }},
      {"signature_ideal",
       [&] {
         const Signature s = signature(ideal.sym());
         return s.n_pos == 2 && s.n_neg == 1 && s.n_zero == 0;
       }},
      {"conjugate_signs_flip",
       [&] {
         const std::vector<int> d{1, -1, 1};
         return conjugate_signs(pair_pos.sym(), d) == pair_neg.sym();
       }},
      {"from_angles_pi_over_3",
       [&] {
         Eigen::MatrixXd theta = Eigen::MatrixXd::Constant(3, 3, pi / 3);
         theta.diagonal().setConstant(pi);
         return (from_angles(theta).matrix() - equi.matrix()).norm() < 1e-15;
       }},
      {"to_angles_ideal",
       [&] {
         const Eigen::MatrixXd theta = to_angles(ideal);
         return near(theta(0, 1), 0.0, 1e-12) && near(theta(0, 2), 0.0, 1e-12) && near(theta(1, 2), 0.0, 1e-12);
       }},
      {"classify_identity",
       [&] {
         const ClassificationReport r = classify_full(i3);
         return r.in_X && r.in_Xbar && !r.in_Y && !r.in_Z && !r.in_Ybar && !r.in_Zbar;
       }},
      {"classify_equilateral",
       [&] {
         const ClassificationReport r = classify_full(equi);
         return r.in_Z && r.in_Zbar && r.in_Xbar && r.in_Ybar && !r.in_X && !r.in_Y;
       }},
      {"classify_ideal",
       [&] {
         const ClassificationReport r = classify_full(ideal);
         return r.in_Ybar && !r.in_X && !r.in_Y && !r.in_Z && !r.in_Xbar && !r.in_Zbar;
       }},
      {"classify_hyperbolic_pi_over_6",
       [&] {
         const InteriorFlags f = classify_exact(hyp6);
         return !f.in_X && f.in_Y && !f.in_Z;
       }},
      {"zbar_witness_pair",
       [&] {
         const ZbarResult z = in_Zbar(pair_neg);
         return z.member && z.witness == std::vector<int>{0, 1};
       }},
      {"xbar_witness_sign",
       [&] {
         const XbarResult x = in_Xbar(pair_pos);
         return x.member && x.witness == std::vector<int>{1, -1, 1};
       }},
      {"ybar_excludes_pair", [&] { return !in_Ybar(pair_pos); }},
      {"in_E_equilateral_frame",
       [&] {
         Eigen::MatrixXd v(2, 3);
         v << 1, -0.5, -0.5, 0, s32, -s32;
         return in_E(NormalFamily(v));
       }},
      {"in_Ebar_antipodal",
       [&] {
         Eigen::MatrixXd v(2, 3);
         v << 1, -1, 0, 0, 0, 1;
         const NormalFamily f(v);
         return in_Ebar(f).first && in_Ebar_dual(f) && !in_E(f);
       }},
      {"positive_kernel_support",
       [&] {
         Eigen::MatrixXd v(2, 3);
         v << 1, -1, 0, 0, 0, 1;
         return positive_kernel(NormalFamily(v)).support == std::vector<int>{0, 1};
       }},
      {"psd_gram_round_trip",
       [&] { return (gram_of(vectors_from_psd_gram(equi, 2)).matrix() - equi.matrix()).norm() < 1e-12; }},
      {"hyperbolic_round_trip",
       [&] {
         const Simplex s = vertices_from_normals(hyperbolic_normals_from_gram(hyp6));
         return (dihedral_angles(s) - to_angles(hyp6)).cwiseAbs().maxCoeff() < 1e-8;
       }},
      {"spherical_octant",
       [&] {
         const Simplex s = spherical_simplex_from_gram(i3);
         const Eigen::MatrixXd g = s.vertices().transpose() * s.vertices();
         return (g - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-10;
       }},
      {"euclidean_tangential_side",
       [&] {
         const Simplex s = euclidean_simplex_from_gram(equi);
         return near((s.vertices().col(0) - s.vertices().col(1)).norm(), 2.0 * std::sqrt(3.0), 1e-10);
       }},
      {"incenter_equal_pairings",
       [&] {
         const DeSitterFamily f = hyperbolic_normals_from_gram(hyp6);
         const Incenter ic = incenter_and_radius(f);
         for (int i = 0; i < 3; ++i) {
           if (!near(-minkowski_dot(ic.center, f.vector(i)), ic.pairing, 1e-10)) return false;
         }
         return ic.radius > 0 && std::isfinite(ic.radius);
       }},
      {"not_hyperbolic_identity",
       [&] { return detail::throws_code([&] { hyperbolic_normals_from_gram(i3); }, Errc::NotHyperbolicGram); }},
      {"mu_values",
       [&] {
         return near(mu(0), std::sqrt(pi) / 2, 1e-14) && near(mu(1), 0.5, 1e-14) &&
                near(mu(2), std::sqrt(pi) / 4, 1e-14);
       }},
      {"orthant_mc_identity",
       [&] { return detail::within_sigma(volume_spherical_extended(i3, 1'000'000, 1), pi / 2); }},
      {"orthant_mc_degenerate_pair",
       [&] { return detail::within_sigma(volume_spherical_extended(pair_pos, 1'000'000, 1), pi); }},
      {"adjugate_quad_ideal",
       [&] { return near(volume_eq1(ideal, MethodChoice::Quad, {}, 1).value, pi, 1e-3); }},
      {"adjugate_quad_pi_over_6",
       [&] { return near(volume_eq1(hyp6, MethodChoice::Quad, {}, 1).value, pi / 2, 1e-3); }},
      {"adjugate_quad_identity",
       [&] { return near(volume_eq1(i3, MethodChoice::Quad, {}, 1).value, pi / 2, 1e-3); }},
      {"oracle_2d",
       [&] {
         return near(volume_2d_oracle(i3), pi / 2, 1e-12) && near(volume_2d_oracle(ideal), pi, 1e-12) &&
                near(volume_2d_oracle(equi), 0.0, 1e-12);
       }},
      {"extended_equilateral_exact_zero",
       [&] {
         const VolumeEstimate v = volume_extended(equi, {}, 1);
         return v.method == VolumeMethod::ExactZero && v.value == 0.0;
       }},
      {"path_eigen_shift_endpoint",
       [&] { return (path_eigen_shift(ideal, 3).back().a.matrix() - equi.matrix()).norm() < 1e-12; }},
      {"path_linear_midpoint",
       [&] { return path_linear(i3, equi, 3)[1].a == uniform_gram(3, -0.25); }},
      {"scan_to_ones_from_equilateral",
       [&] {
         VolumeBudget b;
         b.samples = 200'000;
         const PathScan s = scan(path_to_ones(equi, 5), b, 1);
         if (!s.rows.front().vol || s.rows.front().vol->method != VolumeMethod::ExactZero) return false;
         // The t = 1 endpoint is the ideal triangle, which lies in closure(Y) only.
         for (std::size_t i = 1; i < s.rows.size(); ++i) {
           const ScanRow& r = s.rows[i];
           if (!r.vol || !(r.vol->value > 0)) return false;
           if (r.t < 1.0 && !r.flags.in_Y) return false;
         }
         return verify_theorem1(s);
       }},
      {"theorem1_spherical_to_equilateral",
       [&] {
         VolumeBudget b;
         b.samples = 200'000;
         return verify_theorem1(scan(path_linear(i3, equi, 5), b, 1));
       }},
      {"cli_classify_witness",
       [&] {
         cli::MatrixDocument d{2, cli::MatrixDocument::Mode::Gram, equi.matrix()};
         const cli::CommandOutput o = cli::cmd_classify(d);
         const auto j = cli::json::parse(o.out);
         return o.exit_code == 0 && j["in_Z"] == true && j["witness_B"] == cli::json({1, 2, 3});
       }},
      {"cli_size_guard",
       [&] {
         cli::MatrixDocument d{20, cli::MatrixDocument::Mode::Gram, Eigen::MatrixXd::Identity(21, 21)};
         return cli::cmd_classify(d).exit_code == cli::kSizeGuard;
       }},
      {"cli_eigen_shift_identity_domain",
       [&] {
         cli::MatrixDocument d{2, cli::MatrixDocument::Mode::Gram, i3.matrix()};
         return cli::cmd_path(d, cli::PathKind::EigenShift, 5, {}, 1, std::nullopt).exit_code == cli::kDomain;
       }},
  };

  std::vector<Check> out;
  out.reserve(cases.size());
  for (auto& [name, fn] : cases) {
    Check c{name, false, ""};
    try {
      c.passed = fn();
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::string format_table(const std::vector<Check>& checks) {
  std::string s;
  int failed = 0;
  for (const Check& c : checks) {
    s += (c.passed ? "PASS  " : "FAIL  ") + c.name;
    if (!c.detail.empty()) s += "  (" + c.detail + ")";
    s += "\n";
    failed += c.passed ? 0 : 1;
  }
  s += std::to_string(checks.size() - failed) + "/" + std::to_string(checks.size()) + " checks passed\n";
  return s;
}

inline bool all_passed(const std::vector<Check>& checks) {
  for (const Check& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

}  // namespace simplexvol::selftest
