// Command-line front end: orlicz_cli <subcommand> --config PATH [overrides]

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "orlicz/config.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/runner.hpp"

namespace {

const std::map<std::string, std::string, std::less<>> kSummaries{
    {"check-young", "indices and structure conditions of a Young function"},
    {"verify-calculus", "randomized inequality battery and modular/norm checks"},
    {"verify-operator", "divergence, integration-by-parts and cancellation identities"},
    {"eigen", "constrained minimizers for each boundary condition"},
    {"sweep-mu", "first eigenvalue across constraint levels"},
    {"multiplicity", "hypothesis harness and deflated critical-point search"},
    {"perimeter", "fractional perimeter of the domain under refinement"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orlicz fractional g-Laplacian toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  orlicz::Overrides overrides;
  std::uint64_t seed = 0;
  std::string out;
  double h = 0.0, collar = 0.0, tol = 0.0;

  for (auto name : orlicz::subcommand_names()) {
    const auto summary = kSummaries.find(name);
    CLI::App* sub = app.add_subcommand(std::string(name),
                                       summary == kSummaries.end() ? std::string() : summary->second);
    sub->set_help_flag("--help", "print this help and exit");
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--h", h, "grid spacing")->check(CLI::PositiveNumber);
    sub->add_option("--collar", collar, "collar width")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "solver tolerance")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed")) overrides.seed = seed;
  if (sub->count("--out")) overrides.out = out;
  if (sub->count("--h")) overrides.h = h;
  if (sub->count("--collar")) overrides.collar = collar;
  if (sub->count("--tol")) overrides.tol = tol;

  try {
    const auto command = orlicz::parse_subcommand(sub->get_name());
    orlicz::RunConfig config = orlicz::load_config(config_path);
    orlicz::apply_overrides(config, overrides);
    const orlicz::RunOutcome outcome = orlicz::dispatch(config, command);
    for (const auto& path : outcome.artifacts) fmt::print("wrote {}\n", path);
    for (const auto& f : outcome.failures) fmt::print(stderr, "FAIL {}: {}\n", f.check, f.detail);
    fmt::print("{} {}\n", sub->get_name(), outcome.exit_code == 0 ? "passed" : "failed");
    return outcome.exit_code;
  } catch (const orlicz::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
}
