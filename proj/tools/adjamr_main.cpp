#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adjamr/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adjoint-guided adaptive mesh refinement for linear hyperbolic systems"};
  app.require_subcommand(1, 1);

  std::string config;
  std::string out = "out";
  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "Run configuration file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out, "Output directory")->capture_default_str();
  };

  CLI::App* adjoint = app.add_subcommand("run-adjoint", "Solve the adjoint problem and store snapshots");
  common(adjoint);

  std::string strategy = "difference";
  std::string adjoint_dir;
  CLI::App* forward = app.add_subcommand("run-forward", "Run the forward AMR solver");
  common(forward);
  forward->add_option("--strategy", strategy, "Flagging strategy")
      ->check(CLI::IsMember({"adjoint", "difference", "surface", "everywhere"}))
      ->capture_default_str();
  forward->add_option("--adjoint", adjoint_dir, "Adjoint store directory (default OUT/adjoint)");

  std::vector<std::string> strategies;
  CLI::App* compare = app.add_subcommand("compare", "Compare flagging strategies");
  common(compare);
  compare->add_option("--strategies", strategies, "Strategies to run")
      ->required()
      ->expected(2, -1)
      ->check(CLI::IsMember({"adjoint", "difference", "surface", "everywhere"}));

  int levels = 3;
  CLI::App* convergence = app.add_subcommand("convergence", "Observed order against the analytic solution");
  common(convergence);
  convergence->add_option("--levels-of-resolution", levels, "Number of resolutions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  double threshold = 0.1;
  CLI::App* xt = app.add_subcommand("xt-map", "x-t masks of a 1D run");
  common(xt);
  xt->add_option("--threshold", threshold, "Mask threshold")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (adjoint->parsed()) return adjamr::cmd_run_adjoint(config, out, std::cout, std::cerr);
  if (forward->parsed()) {
    return adjamr::cmd_run_forward(config, out, strategy, adjoint_dir, std::cout, std::cerr);
  }
  if (compare->parsed()) return adjamr::cmd_compare(config, out, strategies, std::cout, std::cerr);
  if (convergence->parsed()) return adjamr::cmd_convergence(config, out, levels, std::cout, std::cerr);
  if (xt->parsed()) return adjamr::cmd_xt_map(config, out, threshold, std::cout, std::cerr);
  return 1;
}
