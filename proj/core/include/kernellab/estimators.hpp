#ifndef KERNELLAB_ESTIMATORS_HPP
#define KERNELLAB_ESTIMATORS_HPP

#include <Eigen/Dense>

#include "kernellab/kernels.hpp"
#include "kernellab/linalg.hpp"

namespace kernellab {

// Kernel ridge estimator in representer form: predictions are
// k*(x)^T dual with dual = (K + lambda I)^{-1} y. lambda = 0 gives the
// minimum-norm interpolant. jitter_used reports any diagonal jitter the
// factorization needed (an effective extra regularization, never silent).
struct FittedEstimator {
  ScaledKernel kernel;
  Eigen::MatrixXd X_train;
  Eigen::VectorXd dual;
  double lambda = 0.0;
  double jitter_used = 0.0;
};

// Factored (K + lambda I) for one training set, reusable across target
// vectors (noise repeats, cross-validation) without re-factorizing.
class KernelSystem {
 public:
  KernelSystem(const ScaledKernel& kernel, Eigen::MatrixXd X, double lambda);

  FittedEstimator fit(const Eigen::VectorXd& y) const;
  const Eigen::MatrixXd& gram_matrix() const { return K_; }
  double jitter() const { return factor_.jitter(); }

 private:
  ScaledKernel kernel_;
  Eigen::MatrixXd X_;
  Eigen::MatrixXd K_;
  SpdFactor factor_;
  double lambda_;
};

FittedEstimator fit_ridge(const ScaledKernel& kernel, const Eigen::MatrixXd& X,
                          const Eigen::VectorXd& y, double lambda);

Eigen::VectorXd predict(const FittedEstimator& est, const Eigen::MatrixXd& X_test);

// Squared Hilbert-space norm of the fitted function, dual^T K dual
// (equivalently y^T (K+lambda I)^{-1} K (K+lambda I)^{-1} y).
double rkhs_norm(const FittedEstimator& est);

// Polyharmonic interpolant sum_i w_i |x - x_i|^alpha (sign-flipped into the
// saddle-point form) plus a constant, from the bordered system
//   [ -D^alpha  1 ] [w]   [y]
//   [  1^T      0 ] [c] = [0]
// with D^alpha the entrywise alpha-th power of the distance matrix. The side
// condition 1^T w = 0 holds by construction. This is the tau -> infinity
// limit of the alpha-exponential interpolant.
struct SplineEstimator {
  Eigen::MatrixXd X_train;
  double alpha = 1.0;  // in (0, 2)
  Eigen::VectorXd weights;
  double constant = 0.0;
};

SplineEstimator fit_flat_limit(double alpha, const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y);

// f(x*) = w^T (-d*(x*)) + c with d*(x*)_i = |x_i - x*|^alpha.
Eigen::VectorXd predict(const SplineEstimator& est, const Eigen::MatrixXd& X_test);

// Degenerate-bandwidth diagnostics for alpha-exponential kernels. At
// tau_small the Gram matrix approaches the identity and the interpolant dies
// off away from the data; at tau_large the Gram matrix collapses towards the
// rank-one all-ones matrix. Both deviations are reported, not thresholded.
struct BandwidthLimitsReport {
  double small_tau_max_offdiag = 0.0;   // max off-diagonal Gram entry at tau_small
  double small_tau_far_pred = 0.0;      // max |prediction| at far points / |y|_inf
  double large_tau_rank_one_dev = 0.0;  // |K - 1 1^T|_op / n at tau_large
};

BandwidthLimitsReport bandwidth_limits_check(const KernelSpec& spec, double tau_small,
                                             double tau_large, const Eigen::MatrixXd& X,
                                             const Eigen::VectorXd& y);

}  // namespace kernellab

#endif
