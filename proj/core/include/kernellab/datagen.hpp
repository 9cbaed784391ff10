#ifndef KERNELLAB_DATAGEN_HPP
#define KERNELLAB_DATAGEN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

namespace kernellab {

// Diagonal input covariance with operator norm pinned to 1 (largest entry 1,
// all entries in (0, 1]).
struct CovarianceModel {
  enum class Kind { Identity, DiagonalPowerLaw, Explicit };

  Kind kind = Kind::Identity;
  int d = 1;
  double kappa = 1.0;          // DiagonalPowerLaw only
  Eigen::VectorXd explicit_diag;  // Explicit only

  static CovarianceModel identity(int d);
  // entries lambda_i = (1 - ((i-1)/d)^kappa)^(1/kappa), i = 1..d
  static CovarianceModel diagonal_power_law(int d, double kappa);
  static CovarianceModel explicit_diagonal(Eigen::VectorXd diag);

  Eigen::VectorXd diag() const;  // materialized diagonal entries
  double trace() const;
  void validate() const;
};

// trace(Sigma) / ||Sigma||_op; the operator norm is 1 by construction.
double effective_dimension(const CovarianceModel& cov);

// Bisection for the power-law exponent kappa such that the covariance trace
// hits target_trace. trace is monotone increasing in kappa; the search runs
// over [1e-6, 1e6] until |trace - target| <= 1e-6 * target.
double kappa_solve(int d, double target_trace);

enum class EntryLaw { StandardNormal, UniformUnitVariance };
enum class Projection { None, Sphere };

struct DistributionSpec {
  CovarianceModel covariance;
  EntryLaw entry_law = EntryLaw::StandardNormal;
  Projection projection = Projection::None;
  double beta = 1.0;  // effective-dimension growth exponent, in (0, 2]

  void validate() const;
};

// n i.i.d. rows x = Sigma^(1/2) w with w entrywise StandardNormal or
// uniform on [-sqrt(3), sqrt(3)] (unit variance). Sphere projection rescales
// every row to squared norm d_eff. Bit-reproducible for a fixed seed: entries
// are drawn in row-major order from one counter stream.
Eigen::MatrixXd sample(const DistributionSpec& spec, int n, int d, std::uint64_t seed);

// Deterministic ground-truth functions; coordinates are 1-based.
struct GroundTruth {
  enum class Kind { Monomial, SineFirstCoord, SparseQuadLin, Custom };

  Kind kind = Kind::Monomial;
  double coeff = 1.0;   // Monomial
  int coordinate = 1;   // Monomial
  int power = 1;        // Monomial
  double frequency = 1.0;  // SineFirstCoord: sin(2 pi f x_1)
  std::function<double(const Eigen::RowVectorXd&)> evaluator;  // Custom

  static GroundTruth monomial(double coeff, int coordinate, int power);
  static GroundTruth sine_first_coord(double frequency = 1.0);
  // 0.5 (x_3^2 + x_5^2 + x_7^2 + x_9^2) - (x_2 + x_4 + x_6 + x_8); needs d >= 9
  static GroundTruth sparse_quad_lin();
  static GroundTruth custom(std::function<double(const Eigen::RowVectorXd&)> fn);

  double operator()(const Eigen::RowVectorXd& x) const;
  Eigen::VectorXd operator()(const Eigen::MatrixXd& X) const;  // rowwise
};

// Concentration diagnostics: both statistics are compared against
// n^(-beta/2) (log n)^((1+eps)/2). trace_sigma is the analytic trace of the
// generating covariance (not an empirical estimate).
struct ConcentrationReport {
  double max_offdiag_inner = 0.0;  // max_{i != j} |x_i . x_j| / tr(Sigma)
  double max_norm_dev = 0.0;       // max_i ||x_i|^2 / tr(Sigma) - 1|
  double bound = 0.0;
  double epsilon = 1.0;
  bool satisfied = false;
};

ConcentrationReport concentration_check(const Eigen::MatrixXd& X, double beta,
                                        double epsilon, double trace_sigma);

}  // namespace kernellab

#endif
