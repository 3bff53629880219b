// simplexvol: classify angle Gram matrices, compute simplex volumes, reconstruct
// simplexes and scan degeneration paths.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "simplexvol/cli.hpp"
#include "simplexvol/selftest.hpp"

namespace {

using namespace simplexvol;

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cli::ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const cli::CommandOutput& o) {
  std::cout << o.out;
  std::cerr << o.err;
  return o.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volumes and classification of spherical, Euclidean and hyperbolic simplexes"};
  app.require_subcommand(1);

  std::string input;
  double tol = kDefaultTol;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  MethodChoice method = MethodChoice::Auto;
  const std::map<std::string, MethodChoice> methods{
      {"auto", MethodChoice::Auto}, {"mc", MethodChoice::MC}, {"quad", MethodChoice::Quad}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", input, "MatrixDocument JSON file, or - for stdin")->required();
    sub->add_option("--tol", tol, "Classification tolerance")->check(CLI::PositiveNumber);
  };
  auto add_volume_opts = [&](CLI::App* sub) {
    sub->add_option("--samples", samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Random seed")->required();
    sub->add_option("--method", method, "auto, mc or quad")
        ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
    sub->add_option("--workers", workers, "Worker threads (0 = all cores); never changes results");
  };

  auto* classify = app.add_subcommand("classify", "Membership in X, Y, Z and their closures");
  add_common(classify);

  auto* volume = app.add_subcommand("volume", "Extended volume");
  add_common(volume);
  add_volume_opts(volume);

  auto* construct = app.add_subcommand("construct", "Reconstruct the simplex from its Gram matrix");
  add_common(construct);

  int steps = 11;
  std::string kind_name = "to_ones";
  std::string second_path;
  auto* path = app.add_subcommand("path", "Scan a degeneration path (CSV)");
  add_common(path);
  add_volume_opts(path);
  path->add_option("--steps", steps, "Number of grid points in [0, 1]")->check(CLI::Range(2, 100000));
  path->add_option("--kind", kind_name, "to_ones, eigen_shift or linear")
      ->check(CLI::IsMember({"to_ones", "eigen_shift", "linear"}));
  path->add_option("--second", second_path, "Endpoint document for --kind linear");

  bool corrupt_mu = false;
  auto* selftest = app.add_subcommand("selftest", "Run the built-in example battery");
  selftest->add_flag("--inject-mu-fault", corrupt_mu, "Negative control: perturb mu_k")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kParse;
  }

  if (selftest->parsed()) {
    const auto checks = selftest::run({corrupt_mu});
    std::cout << selftest::format_table(checks);
    return selftest::all_passed(checks) ? cli::kOk : cli::kSelftestFailed;
  }

  cli::MatrixDocument doc;
  std::optional<cli::MatrixDocument> second;
  try {
    doc = cli::parse_document(read_input(input));
    if (!second_path.empty()) second = cli::parse_document(read_input(second_path));
  } catch (const cli::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return cli::kParse;
  }

  VolumeBudget budget;
  budget.samples = samples;
  budget.method = method;
  budget.workers = workers;

  if (classify->parsed()) return emit(cli::cmd_classify(doc, tol));
  if (volume->parsed()) return emit(cli::cmd_volume(doc, budget, seed, tol));
  if (construct->parsed()) return emit(cli::cmd_construct(doc, tol));
  const cli::PathKind kind = kind_name == "linear"        ? cli::PathKind::Linear
                             : kind_name == "eigen_shift" ? cli::PathKind::EigenShift
                                                          : cli::PathKind::ToOnes;
  return emit(cli::cmd_path(doc, kind, steps, budget, seed, second, tol));
}
