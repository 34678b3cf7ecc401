#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypstab/errors.hpp"
#include "hypstab/scenario.hpp"

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hypstab::InvalidInput("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hypstab::InvalidInput("cannot write '" + path + "'");
  out << text;
}

// Options shared by every subcommand.
struct Common {
  std::string model = "free:2";
  std::optional<std::uint64_t> seed;
  std::string report;
  std::string csv;
};

void add_common(CLI::App* sub, Common& c, bool sampling) {
  sub->add_option("--model", c.model, "free:N or surface:G")->capture_default_str();
  auto* s = sub->add_option("--seed", c.seed, "RNG seed");
  if (sampling) s->required();
  sub->add_option("--report", c.report, "write the JSON report here instead of stdout");
}

// Adds an option that is copied into the check only when given.
template <class T>
void opt(CLI::App* sub, Json& check, const std::string& flag, const std::string& key, const std::string& help) {
  sub->add_option_function<T>(flag, [&check, key](const T& v) { check[key] = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic group and circle action checks"};
  app.require_subcommand(1);
  Common common;
  Json check;
  std::string scenario_path;

  auto* ball = app.add_subcommand("ball", "enumerate a ball of the Cayley graph");
  add_common(ball, common, false);
  opt<int>(ball, check, "--radius", "radius", "ball radius");

  auto* delta = app.add_subcommand("delta", "thin-triangle constant and delta certificate");
  add_common(delta, common, true);
  opt<int>(delta, check, "--radius", "radius", "ball radius");
  opt<int>(delta, check, "--inner", "inner", "inner radius for triangle vertices");
  opt<std::size_t>(delta, check, "--samples", "samples", "sample size beyond the exhaustive limit");
  opt<std::string>(delta, check, "--candidate", "candidate", "delta to certify (default 2 nu, +1 if needed)");

  auto* gromov = app.add_subcommand("gromov", "Gromov products of vertices or boundary points");
  add_common(gromov, common, false);
  opt<int>(gromov, check, "--radius", "radius", "ball radius");
  opt<std::string>(gromov, check, "--x", "x", "word");
  opt<std::string>(gromov, check, "--y", "y", "word");
  opt<std::string>(gromov, check, "--base", "base", "base point word");
  opt<std::string>(gromov, check, "--alpha", "alpha", "boundary point prefix|period");
  opt<std::string>(gromov, check, "--beta", "beta", "boundary point prefix|period");
  opt<int>(gromov, check, "--depth", "depth", "truncation depth");
  opt<std::string>(gromov, check, "--nu", "nu", "ray fellow-travel constant");

  auto* project = app.add_subcommand("project", "coarse projection diameters of sampled triples");
  add_common(project, common, true);
  opt<int>(project, check, "--radius", "radius", "ball radius");
  opt<std::string>(project, check, "--r", "r", "projection radius");
  opt<int>(project, check, "--depth", "depth", "truncation depth");
  opt<std::string>(project, check, "--nu", "nu", "ray fellow-travel constant");
  opt<std::size_t>(project, check, "--triples", "triples", "number of triples");
  opt<int>(project, check, "--q-bound", "q_bound", "fail if the diameter exceeds this");

  auto* ledger = app.add_subcommand("ledger", "constants H and R");
  add_common(ledger, common, false);
  opt<std::string>(ledger, check, "--delta", "delta", "hyperbolicity constant");
  opt<int>(ledger, check, "--q", "q", "projection diameter bound Q(3 delta)");
  opt<int>(ledger, check, "--diam", "diam", "diameter of the projection of D0");
  opt<int>(ledger, check, "--c-v", "c_v", "neighbourhood constant C_V");

  auto* broken = app.add_subcommand("broken", "randomized broken-geodesic scan");
  add_common(broken, common, true);
  opt<std::string>(broken, check, "--delta", "delta", "hyperbolicity constant");
  opt<std::size_t>(broken, check, "--instances", "instances", "instances to check");
  opt<int>(broken, check, "--segments", "segments", "segments per round");
  opt<int>(broken, check, "--min-length", "min_length", "shortest segment");
  opt<int>(broken, check, "--max-backtrack", "max_backtrack", "junction backtracking");
  opt<int>(broken, check, "--thickness", "thickness", "tube thickness");

  auto* recon = app.add_subcommand("reconstruct", "rebuild a geodesic from noisy axis data");
  add_common(recon, common, true);
  opt<std::string>(recon, check, "--delta", "delta", "hyperbolicity constant");
  opt<std::string>(recon, check, "--nu", "nu", "ray fellow-travel constant");
  opt<int>(recon, check, "--H", "h", "coarse constant H");
  opt<int>(recon, check, "--r", "r", "window length R (default: smallest admissible)");
  opt<std::string>(recon, check, "--axis", "axis", "axis word");
  opt<int>(recon, check, "--power", "power", "axis repetitions");
  opt<int>(recon, check, "--trials", "trials", "seeded trials");
  recon->add_flag_function("--all-neighbors", [&check](std::int64_t) { check["all_neighbors"] = true; },
                           "use the whole H-neighbourhood of the axis");

  auto* perturb = app.add_subcommand("perturb-verify", "semi-conjugacy of a perturbed circle action");
  add_common(perturb, common, false);
  perturb->add_option("--csv", common.csv, "write the graph of h here");
  std::string spec_arg = "schottky";
  perturb->add_option("--spec", spec_arg, "schottky, fuchsian or a JSON spec file")->capture_default_str();
  opt<std::string>(perturb, check, "--mode", "mode", "free or conjugate");
  opt<double>(perturb, check, "--eps", "eps", "perturbation size");
  opt<int>(perturb, check, "--cap", "cap", "word length cap for fixed points");
  opt<int>(perturb, check, "--word-length", "word_length", "verify words up to this length");
  opt<int>(perturb, check, "--grid", "grid", "verification grid");
  opt<int>(perturb, check, "--sample-depth", "sample_depth", "verify on the minimal-set sample instead");
  opt<int>(perturb, check, "--nest-depth", "nest_depth", "check nesting of minimal-set covers");
  opt<double>(perturb, check, "--tolerance", "tolerance", "defect tolerance");
  opt<double>(perturb, check, "--identity-bound", "identity_bound", "bound on sup |h - id|");

  auto* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("scenario", scenario_path, "scenario JSON")->required();
  run->add_option("--report", common.report, "write the JSON report here instead of stdout");
  run->add_option("--csv", common.csv, "write the graph of h here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::string document;
    if (run->parsed()) {
      document = read_file(scenario_path);
    } else {
      CLI::App* sub = app.get_subcommands().front();
      check["type"] = sub->get_name();
      if (sub == perturb) {
        check["spec"] = std::filesystem::exists(spec_arg) ? Json::parse(read_file(spec_arg)) : Json(spec_arg);
      }
      Json doc;
      doc["model"] = common.model;
      if (common.seed) doc["seed"] = *common.seed;
      doc["checks"] = Json::array({check});
      document = doc.dump();
    }
    const auto result = hypstab::run_scenario(document);
    if (common.report.empty()) {
      std::cout << result.report;
    } else {
      write_file(common.report, result.report);
    }
    if (!common.csv.empty() && !result.csv.empty()) write_file(common.csv, result.csv);
    for (const auto& c : result.checks)
      if (!c.pass) std::cerr << "check failed: " << c.name << "\n";
    return result.exit_code();
  } catch (const hypstab::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
