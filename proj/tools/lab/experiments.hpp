#ifndef KERNELLAB_LAB_EXPERIMENTS_HPP
#define KERNELLAB_LAB_EXPERIMENTS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include <kernellab/datagen.hpp>
#include <kernellab/kernels.hpp>

#include "lab/config.hpp"

namespace kernellab::lab {

// Stable seed derivation: every sampling site gets its own tag so adding a
// draw to one experiment never shifts the streams of another.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

// n rows uniform on [0,1]^d, filled row-major from one counter stream.
Eigen::MatrixXd sample_unit_cube(int n, int d, std::uint64_t seed);

// An input model instantiated at a sweep point. For the cube there is no
// covariance; spec still holds an identity placeholder so callers can pass
// it around uniformly.
struct ResolvedInput {
  bool cube = false;
  int d = 0;
  double d_eff = 0.0;  // trace of the covariance; equals d for cube inputs
  DistributionSpec spec;
};

ResolvedInput resolve_input(const InputConfig& input, double beta, int n);

// Lambda selection under a policy. For CrossValidated the grid is {0} plus
// 10^k * trace(K)/n for k = -8..2, scored by pooled 5-fold validation error;
// for Zero/Fixed the risk of that single lambda is reported.
struct CvChoice {
  double lambda = 0.0;
  double risk = 0.0;
};

CvChoice cross_validate_lambda(const ScaledKernel& kernel, const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y, const LambdaPolicy& policy,
                               std::uint64_t fold_seed);

// One sweep point of a bias estimate. error is empty on success; on failure
// the numeric fields other than grid_value and d are NaN.
struct BiasRow {
  double grid_value = 0.0;
  int d = 0;
  double bias = 0.0;
  double bias_norm = 0.0;
  double b0 = 0.0;
  double se = 0.0;  // standard error of the bias estimate over test points
  double runtime_s = 0.0;
  std::string error;
};

std::vector<BiasRow> beta_sweep(const ExperimentConfig& cfg, unsigned jobs = 1);
std::vector<BiasRow> tau_sweep(const ExperimentConfig& cfg, unsigned jobs = 1);

struct SliceRow {
  double alpha = 0.0;
  double fhat = 0.0;
  double fstar = 0.0;
};

std::vector<SliceRow> slice_trace(const ExperimentConfig& cfg);

struct BiasVarianceRow {
  int d = 0;
  double bias = 0.0;
  double variance = 0.0;
  std::string error;
};

std::vector<BiasVarianceRow> bias_variance(const ExperimentConfig& cfg,
                                           unsigned jobs = 1);

struct FeatselRow {
  int step = 0;
  int feature = 0;  // 1-based, matching GroundTruth coordinates
  double cv_risk = 0.0;
};

std::vector<FeatselRow> greedy_feature_selection(const ExperimentConfig& cfg);

struct RkhsRow {
  std::string family;
  int d = 0;
  double norm = 0.0;
  std::string error;
};

std::vector<RkhsRow> rkhs_growth(const ExperimentConfig& cfg);

struct DiagnoseRow {
  std::string metric;
  double value = 0.0;
};

std::vector<DiagnoseRow> diagnose(const ExperimentConfig& cfg);

// Runs cfg.experiment, writes <out_dir>/<experiment>.csv (and .svg when the
// experiment has a natural chart and cfg.svg is set), and reports how many
// grid points failed. message carries the error of a whole-experiment
// failure, in which case only the CSV header is written.
struct RunSummary {
  std::size_t points = 0;
  std::size_t failures = 0;
  std::string csv_path;
  std::string svg_path;  // empty when no chart was written
  std::string message;
};

RunSummary run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                          unsigned jobs = 1);

}  // namespace kernellab::lab

#endif
