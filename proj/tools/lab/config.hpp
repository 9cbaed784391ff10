#ifndef KERNELLAB_LAB_CONFIG_HPP
#define KERNELLAB_LAB_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <kernellab/datagen.hpp>
#include <kernellab/kernels.hpp>

namespace kernellab::lab {

// Raised for anything wrong with a config file: unreadable, malformed JSON,
// unknown keys, out-of-range values. The CLI maps it to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Kernel plus the bandwidth resolution rule: tau <= 0 means "use the
// effective dimension of the input model at this grid point".
struct KernelConfig {
  KernelSpec spec = KernelSpec::alpha_exponential(1.0);
  double tau = 0.0;
};

// Input models. P1/P2/P3 grow with (n, beta); UnitCube and Explicit carry a
// fixed dimension and ignore the sweep variable.
//   P1: x ~ N(0, I_d), d = floor(n^beta)
//   P2: P1 rows rescaled onto the sphere of squared radius d
//   P3: d = n, uniform entries, power-law diagonal with trace n^beta
//   UnitCube: x uniform on [0,1]^d (slice / rkhs-growth style experiments)
//   Explicit: a fully spelled-out DistributionSpec
struct InputConfig {
  enum class Preset { P1, P2, P3, UnitCube, Explicit };

  Preset preset = Preset::P1;
  double beta = 0.5;  // presets P1/P2/P3 and Explicit validation
  int d = 0;          // UnitCube only
  DistributionSpec explicit_spec;  // Explicit only
};

struct LambdaPolicy {
  enum class Kind { Zero, Fixed, CrossValidated };

  Kind kind = Kind::Zero;
  double value = 0.0;  // Fixed only
};

struct NoiseConfig {
  enum class Kind { None, Uniform, Gaussian };

  Kind kind = Kind::None;
  double amplitude = 0.0;  // Uniform: additive on [-amplitude, amplitude]
  double sigma = 0.0;      // Gaussian standard deviation
};

// One parsed config file. Every experiment reads the subset of fields it
// needs; load_config fills experiment-appropriate defaults and rejects keys
// that do not belong to the requested experiment.
struct ExperimentConfig {
  std::string experiment;  // optional; cross-checked against the subcommand

  int n = 0;
  int n_test = 0;  // 0 means 5 * n
  int repeats = 20;
  std::uint64_t seed = 0;

  KernelConfig kernel;
  InputConfig input;
  GroundTruth ground_truth;
  LambdaPolicy lambda;
  NoiseConfig noise;

  std::vector<double> beta_grid;  // beta-sweep
  std::vector<double> tau_grid;   // tau-sweep
  std::vector<int> d_grid;        // bias-variance, rkhs-growth

  int d = 0;             // slice: ambient cube dimension
  int slice_points = 101;
  int budget = 0;        // featsel: steps; 0 means all features
  double epsilon = 1.0;  // diagnose: concentration exponent
  int surrogate_m = 0;   // diagnose: 0 means derive from beta and the domain

  bool svg = true;
};

// Parses and validates a JSON config for the named experiment (one of the
// CLI subcommands). Throws ConfigError with a path-prefixed message.
ExperimentConfig load_config(const std::string& path, const std::string& experiment);

}  // namespace kernellab::lab

#endif
