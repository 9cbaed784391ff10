#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "lab/config.hpp"
#include "lab/experiments.hpp"

namespace {

constexpr const char* kExperiments[] = {"beta-sweep", "tau-sweep",  "slice",
                                        "bias-variance", "featsel", "rkhs-growth",
                                        "diagnose"};

constexpr const char* kDescriptions[] = {
    "bias across the effective-dimension exponent",
    "bias across the kernel bandwidth on one fixed sample",
    "interpolant values along a coordinate slice",
    "bias and variance across ambient dimension under noise",
    "greedy forward feature selection by cross-validated risk",
    "interpolant RKHS norm across dimension for three kernel families",
    "concentration and surrogate diagnostics for one configuration"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel regression experiment driver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned jobs = 1;

  for (std::size_t i = 0; i < std::size(kExperiments); ++i) {
    CLI::App* sub = app.add_subcommand(kExperiments[i], kDescriptions[i]);
    sub->add_option("--config", config_path, "JSON experiment config")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory for CSV/SVG")->required();
    sub->add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_option("--jobs", jobs, "grid points to run in parallel")
        ->check(CLI::Range(1u, 256u));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // bad usage is a config error; --help is not
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  try {
    kernellab::lab::ExperimentConfig cfg =
        kernellab::lab::load_config(config_path, experiment);
    if (seed_given) cfg.seed = seed;

    const kernellab::lab::RunSummary summary =
        kernellab::lab::run_experiment(cfg, out_dir, jobs);

    if (!summary.message.empty())
      std::fprintf(stderr, "%s: %s\n", experiment.c_str(), summary.message.c_str());
    std::printf("%s: %zu point%s, %zu failed\n", experiment.c_str(), summary.points,
                summary.points == 1 ? "" : "s", summary.failures);
    std::printf("wrote %s\n", summary.csv_path.c_str());
    if (!summary.svg_path.empty()) std::printf("wrote %s\n", summary.svg_path.c_str());

    if (summary.points > 0 && summary.failures == summary.points) return 2;
    return 0;
  } catch (const kernellab::lab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
