#pragma once

/**
 * @brief Command implementations behind the `simplexvol` executable.
 *
 * Each command takes parsed inputs and returns the text for stdout plus an
 * exit code, so the commands can be tested without spawning a process.
 * Exit codes: 0 ok, 1 selftest failure, 2 parse error, 3 size guard, 4 domain.
 */

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "simplexvol/degen.hpp"
#include "simplexvol/error.hpp"
#include "simplexvol/geometry.hpp"
#include "simplexvol/gram.hpp"
#include "simplexvol/volume.hpp"

namespace simplexvol::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kSelftestFailed = 1, kParse = 2, kSizeGuard = 3, kDomain = 4 };

struct CommandOutput {
  int exit_code = kOk;
  std::string out;
  std::string err;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline int exit_code_for(Errc e) {
  switch (e) {
    case Errc::TooLarge: return kSizeGuard;
    case Errc::BadAngles:
    case Errc::EntryOutOfRange:
    case Errc::InvalidArgument:
    case Errc::SizeMismatch:
    case Errc::DimMismatch:
    case Errc::BadSignVector:
    case Errc::IndexOutOfRange: return kParse;
    default: return kDomain;
  }
}

struct MatrixDocument {
  enum class Mode { Gram, AnglesRadians, AnglesDegrees };

  int n = 0;
  Mode mode = Mode::Gram;
  Eigen::MatrixXd entries;

  /// Angle modes go through from_angles; BadAngles surfaces as a parse error.
  GramMatrix to_gram() const {
    try {
      switch (mode) {
        case Mode::Gram: return GramMatrix(entries);
        case Mode::AnglesRadians: return from_angles(entries);
        case Mode::AnglesDegrees: return from_angles(entries * (std::numbers::pi / 180.0));
      }
    } catch (const Error& e) {
      throw ParseError(e.what());
    }
    throw ParseError("unknown mode");
  }
};

inline MatrixDocument parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("document must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<int>() < 1) {
    throw ParseError("field 'n' must be a positive integer");
  }
  MatrixDocument d;
  d.n = j["n"].get<int>();
  const std::string mode = j.value("mode", std::string("gram"));
  if (mode == "gram") {
    d.mode = MatrixDocument::Mode::Gram;
  } else if (mode == "angles_radians") {
    d.mode = MatrixDocument::Mode::AnglesRadians;
  } else if (mode == "angles_degrees") {
    d.mode = MatrixDocument::Mode::AnglesDegrees;
  } else {
    throw ParseError("field 'mode' must be gram, angles_radians or angles_degrees");
  }
  const int m = d.n + 1;
  if (!j.contains("entries") || !j["entries"].is_array() || static_cast<int>(j["entries"].size()) != m) {
    throw ParseError("field 'entries' must hold n+1 rows");
  }
  d.entries.resize(m, m);
  for (int r = 0; r < m; ++r) {
    const json& row = j["entries"][r];
    if (!row.is_array() || static_cast<int>(row.size()) != m) throw ParseError("each row must hold n+1 numbers");
    for (int c = 0; c < m; ++c) {
      if (!row[c].is_number()) throw ParseError("entries must be numbers");
      d.entries(r, c) = row[c].get<double>();
    }
  }
  for (int r = 0; r < m; ++r) {
    for (int c = r + 1; c < m; ++c) {
      if (std::abs(d.entries(r, c) - d.entries(c, r)) > 1e-12) throw ParseError("entries are not symmetric");
    }
  }
  const double diag = d.mode == MatrixDocument::Mode::Gram            ? 1.0
                      : d.mode == MatrixDocument::Mode::AnglesRadians ? std::numbers::pi
                                                                      : 180.0;
  for (int i = 0; i < m; ++i) {
    if (std::abs(d.entries(i, i) - diag) > 1e-12 * diag) throw ParseError("diagonal entries have the wrong value");
  }
  return d;
}

inline json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Columns of `m` as a list of points.
inline json columns_to_json(const Eigen::MatrixXd& m) { return to_json(Eigen::MatrixXd(m.transpose())); }

inline json optional_indices(const std::optional<std::vector<int>>& idx, int offset) {
  if (!idx) return nullptr;
  json a = json::array();
  for (int i : *idx) a.push_back(i + offset);
  return a;
}

/// Witness index sets are 1-based in JSON.
inline json to_json(const ClassificationReport& r) {
  return json{{"in_X", r.in_X},
              {"in_Y", r.in_Y},
              {"in_Z", r.in_Z},
              {"in_Xbar", r.in_Xbar},
              {"in_Ybar", r.in_Ybar},
              {"in_Zbar", r.in_Zbar},
              {"witness_D", optional_indices(r.witness_D, 0)},
              {"witness_B", optional_indices(r.witness_B, 1)},
              {"det", r.det_A},
              {"tol", r.tol_used}};
}

inline ClassificationReport report_from_json(const json& j) {
  ClassificationReport r;
  r.in_X = j.at("in_X");
  r.in_Y = j.at("in_Y");
  r.in_Z = j.at("in_Z");
  r.in_Xbar = j.at("in_Xbar");
  r.in_Ybar = j.at("in_Ybar");
  r.in_Zbar = j.at("in_Zbar");
  if (!j.at("witness_D").is_null()) r.witness_D = j.at("witness_D").get<std::vector<int>>();
  if (!j.at("witness_B").is_null()) {
    std::vector<int> b = j.at("witness_B").get<std::vector<int>>();
    for (int& i : b) --i;
    r.witness_B = b;
  }
  r.det_A = j.at("det");
  r.tol_used = j.at("tol");
  return r;
}

inline json to_json(const VolumeEstimate& v) {
  return json{{"value", v.value},
              {"std_error", v.std_error},
              {"method", std::string(method_name(v.method))},
              {"seed", v.seed ? json(*v.seed) : json(nullptr)},
              {"samples", v.samples},
              {"quad_tol", v.quad_tol}};
}

inline VolumeEstimate estimate_from_json(const json& j) {
  VolumeEstimate v;
  v.value = j.at("value");
  v.std_error = j.at("std_error");
  const std::string m = j.at("method");
  for (VolumeMethod c : {VolumeMethod::OrthantMC, VolumeMethod::OrthantQuad, VolumeMethod::AdjugateMC,
                         VolumeMethod::AdjugateQuad, VolumeMethod::ClosedForm2D, VolumeMethod::ExactZero}) {
    if (method_name(c) == m) v.method = c;
  }
  if (!j.at("seed").is_null()) v.seed = j.at("seed").get<std::uint64_t>();
  v.samples = j.at("samples");
  v.quad_tol = j.at("quad_tol");
  return v;
}

/// 17 significant digits, '.' decimal separator regardless of locale.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  for (char& ch : s) {
    if (ch == ',') ch = '.';
  }
  return s;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <class F>
CommandOutput guarded(F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    return {kParse, "", std::string("parse error: ") + e.what() + "\n"};
  } catch (const Error& e) {
    return {exit_code_for(e.code()), "", std::string("error: ") + e.what() + "\n"};
  }
}

inline CommandOutput cmd_classify(const MatrixDocument& doc, double tol = kDefaultTol) {
  return guarded([&] {
    const GramMatrix a = doc.to_gram();
    return CommandOutput{kOk, dump(to_json(classify_full(a, tol))), ""};
  });
}

inline CommandOutput cmd_volume(const MatrixDocument& doc, const VolumeBudget& budget, std::uint64_t seed,
                                double tol = kDefaultTol) {
  return guarded([&] {
    const GramMatrix a = doc.to_gram();
    detail::check_size(a);
    return CommandOutput{kOk, dump(to_json(volume_extended(a, budget, seed, tol))), ""};
  });
}

inline CommandOutput cmd_construct(const MatrixDocument& doc, double tol = kDefaultTol) {
  return guarded([&] {
    const GramMatrix a = doc.to_gram();
    const InteriorFlags f = classify_exact(a, tol);
    json j;
    if (f.in_X) {
      const Simplex s = spherical_simplex_from_gram(a, tol);
      j = {{"space", space_name(s.space())},
           {"vertices", columns_to_json(s.vertices())},
           {"angles", to_json(dihedral_angles(s))}};
    } else if (f.in_Y) {
      const DeSitterFamily normals = center_normalize(hyperbolic_normals_from_gram(a, tol));
      const Simplex s = vertices_from_normals(normals);
      const Incenter ic = incenter_and_radius(normals);
      j = {{"space", space_name(s.space())},
           {"vertices", columns_to_json(s.vertices())},
           {"normals", columns_to_json(normals.vectors())},
           {"angles", to_json(dihedral_angles(s))},
           {"incenter", std::vector<double>(ic.center.coords.begin(), ic.center.coords.end())},
           {"inradius", ic.radius}};
    } else if (f.in_Z) {
      const Simplex s = euclidean_simplex_from_gram(a, tol);
      j = {{"space", space_name(s.space())},
           {"vertices", columns_to_json(s.vertices())},
           {"normals", columns_to_json(vectors_from_psd_gram(a, a.n(), tol).vectors())},
           {"angles", to_json(dihedral_angles(s))},
           {"inradius", 1.0}};
    } else {
      return CommandOutput{kDomain, "", "error: matrix is not in X, Y or Z\n"};
    }
    return CommandOutput{kOk, dump(j), ""};
  });
}

enum class PathKind { ToOnes, EigenShift, Linear };

inline std::string scan_to_csv(const PathScan& s) {
  std::ostringstream os;
  os << "t,det,in_X,in_Y,in_Z,in_Xbar,in_Ybar,in_Zbar,volume,std_error,method\n";
  for (const ScanRow& r : s.rows) {
    const auto& f = r.flags;
    os << format_double(r.t) << ',' << format_double(r.det) << ',' << f.in_X << ',' << f.in_Y << ',' << f.in_Z
       << ',' << f.in_Xbar << ',' << f.in_Ybar << ',' << f.in_Zbar << ',';
    if (r.vol) {
      os << format_double(r.vol->value) << ',' << format_double(r.vol->std_error) << ','
         << method_name(r.vol->method);
    } else {
      os << ",,";
    }
    os << '\n';
  }
  return os.str();
}

inline CommandOutput cmd_path(const MatrixDocument& doc, PathKind kind, int steps, const VolumeBudget& budget,
                              std::uint64_t seed, const std::optional<MatrixDocument>& second,
                              double tol = kDefaultTol) {
  return guarded([&] {
    const GramMatrix a = doc.to_gram();
    detail::check_size(a);
    std::vector<PathPoint> path;
    switch (kind) {
      case PathKind::ToOnes: path = path_to_ones(a, steps); break;
      case PathKind::EigenShift: path = path_eigen_shift(a, steps, false, tol); break;
      case PathKind::Linear:
        if (!second) throw ParseError("path kind 'linear' needs --second");
        path = path_linear(a, second->to_gram(), steps);
        break;
    }
    const PathScan s = scan(path, budget, seed, tol);
    const bool pass = verify_theorem1(s);
    return CommandOutput{kOk, scan_to_csv(s) + "# theorem1: " + (pass ? "PASS" : "FAIL") + "\n", ""};
  });
}

}  // namespace simplexvol::cli
