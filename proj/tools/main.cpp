#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "unfitted/errors.hpp"
#include "unfitted/experiment.hpp"

namespace {

void print_summary(const unfitted::ExperimentConfig& config, const std::vector<unfitted::ResultRecord>& records) {
  std::printf("%-12s %7s %5s %5s %12s %12s %12s %12s  %s\n", "epsilon", "n_dofs", "M", "N", "lambda_max", "err_energy",
              "err_h1", "err_l2", "status");
  for (const auto& r : records) {
    std::printf("%-12.5e %7zu %5zu %5zu %12.5e %12.5e %12.5e %12.5e  %s", r.epsilon, r.n_dofs, r.M, r.N, r.lambda_max,
                r.err_energy, r.err_h1, r.err_l2, std::string(unfitted::to_string(r.status)).c_str());
    if (config.diagnostics && r.ok()) {
      std::printf("  c=%.4g C=%.4g cea=%.4g", *r.c_est, *r.C_est, *r.cea_ratio);
    }
    std::printf("\n");
  }
  const auto markers = unfitted::dof_drop_markers(records);
  if (!markers.empty()) {
    std::printf("dof drops at epsilon:");
    for (double m : markers) std::printf(" %.5e", m);
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unfitted Nitsche finite elements: epsilon sweeps over sliver cut configurations"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an epsilon sweep of one example and write a CSV");
  std::string example = "ex1-quad";
  int K = 16;
  int order = 1;
  double eps_from = std::ldexp(1.0, -4);
  double eps_to = std::ldexp(1.0, -24);
  double eps_factor = 0.5;
  std::string variant = "nitsche";
  double cap = 16000.0;
  int depth = unfitted::kDefaultTessellationDepth;
  bool diagnostics = false;
  std::string out;
  bool quiet = false;

  run->add_option("--example", example, "ex1-tri | ex1-quad | ex2 | ex3 | ex4")
      ->check(CLI::IsMember({"ex1-tri", "ex1-quad", "ex2", "ex3", "ex4"}))
      ->capture_default_str();
  run->add_option("--K", K, "cells per unit length, h = 1/K")->capture_default_str();
  run->add_option("--order", order, "polynomial order (1 or 2)")->check(CLI::IsMember({1, 2}))->capture_default_str();
  run->add_option("--eps-from", eps_from, "largest epsilon")->capture_default_str();
  run->add_option("--eps-to", eps_to, "smallest epsilon")->capture_default_str();
  run->add_option("--eps-factor", eps_factor, "ratio between consecutive epsilons")->capture_default_str();
  run->add_option("--variant", variant, "nitsche | hybrid")
      ->check(CLI::IsMember({"nitsche", "hybrid"}))
      ->capture_default_str();
  run->add_option("--cap", cap, "penalty cap C_lambda for the hybrid variant")->capture_default_str();
  run->add_option("--depth", depth, "tessellation refinement depth")->capture_default_str();
  run->add_flag("--diagnostics", diagnostics, "append c_est, C_est and the Cea ratio");
  run->add_option("--out", out, "CSV output path");
  run->add_flag("--quiet", quiet, "do not print the summary table");

  CLI11_PARSE(app, argc, argv);

  try {
    unfitted::ExperimentConfig config;
    config.example = unfitted::parse_example(example);
    config.K = K;
    config.order = order;
    config.eps_list = unfitted::geometric_sweep(eps_from, eps_to, eps_factor);
    config.variant = variant == "hybrid" ? unfitted::FormVariant::hybrid(cap) : unfitted::FormVariant::symmetric_nitsche();
    config.tess_depth = depth;
    config.diagnostics = diagnostics;
    config.output = out;
    const auto records = unfitted::run_sweep(config);
    if (out.empty()) unfitted::write_csv(std::cout, config, records);
    else if (!quiet) print_summary(config, records);
  } catch (const unfitted::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
