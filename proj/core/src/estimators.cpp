#include "kernellab/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace kernellab {

namespace {

// Entrywise |x_i - x_j|^alpha over rows, exact zero diagonal.
Eigen::MatrixXd distance_power_matrix(const Eigen::MatrixXd& X, double alpha) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd ip(n, n);
  ip.setZero();
  ip.selfadjointView<Eigen::Lower>().rankUpdate(X);
  Eigen::VectorXd sq = ip.diagonal();

  Eigen::MatrixXd D(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    D(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist_sq = std::max(sq[i] + sq[j] - 2.0 * ip(j, i), 0.0);
      const double value = std::pow(dist_sq, 0.5 * alpha);
      D(i, j) = value;
      D(j, i) = value;
    }
  }
  return D;
}

// Validates arguments on the way to the Gram matrix so the members can be
// built directly in the initializer list.
Eigen::MatrixXd checked_gram(const ScaledKernel& kernel, const Eigen::MatrixXd& X,
                             double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("KernelSystem: lambda must be >= 0");
  if (X.rows() < 1) throw std::invalid_argument("KernelSystem: empty training set");
  return gram(kernel, X);
}

Eigen::MatrixXd shifted_diagonal(Eigen::MatrixXd K, double lambda) {
  if (lambda > 0.0) K.diagonal().array() += lambda;
  return K;
}

}  // namespace

KernelSystem::KernelSystem(const ScaledKernel& kernel, Eigen::MatrixXd X, double lambda)
    : kernel_(kernel),
      X_(std::move(X)),
      K_(checked_gram(kernel_, X_, lambda)),
      factor_(SpdFactor::compute(shifted_diagonal(K_, lambda))),
      lambda_(lambda) {}

FittedEstimator KernelSystem::fit(const Eigen::VectorXd& y) const {
  if (y.size() != X_.rows()) throw std::invalid_argument("KernelSystem::fit: size mismatch");
  FittedEstimator est;
  est.kernel = kernel_;
  est.X_train = X_;
  est.dual = factor_.solve(y);
  est.lambda = lambda_;
  est.jitter_used = factor_.jitter();
  return est;
}

FittedEstimator fit_ridge(const ScaledKernel& kernel, const Eigen::MatrixXd& X,
                          const Eigen::VectorXd& y, double lambda) {
  return KernelSystem(kernel, X, lambda).fit(y);
}

Eigen::VectorXd predict(const FittedEstimator& est, const Eigen::MatrixXd& X_test) {
  if (X_test.cols() != est.X_train.cols())
    throw std::invalid_argument("predict: dimension mismatch");
  return gram_cross(est.kernel, X_test, est.X_train) * est.dual;
}

double rkhs_norm(const FittedEstimator& est) {
  const Eigen::MatrixXd K = gram(est.kernel, est.X_train);
  return est.dual.dot(K * est.dual);
}

SplineEstimator fit_flat_limit(double alpha, const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y) {
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::invalid_argument("fit_flat_limit: alpha must lie in (0, 2)");
  const Eigen::Index n = X.rows();
  if (n < 1) throw std::invalid_argument("fit_flat_limit: empty training set");
  if (y.size() != n) throw std::invalid_argument("fit_flat_limit: size mismatch");

  const Eigen::MatrixXd D = distance_power_matrix(X, alpha);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (D(i, j) == 0.0)
        throw std::invalid_argument("fit_flat_limit: duplicate training rows");

  Eigen::MatrixXd bordered(n + 1, n + 1);
  bordered.topLeftCorner(n, n) = -D;
  bordered.topRightCorner(n, 1).setOnes();
  bordered.bottomLeftCorner(1, n).setOnes();
  bordered(n, n) = 0.0;

  Eigen::VectorXd rhs(n + 1);
  rhs.head(n) = y;
  rhs[n] = 0.0;

  const Eigen::VectorXd solution = solve_symmetric_indefinite(bordered, rhs);

  SplineEstimator est;
  est.X_train = X;
  est.alpha = alpha;
  est.weights = solution.head(n);
  est.constant = solution[n];
  return est;
}

Eigen::VectorXd predict(const SplineEstimator& est, const Eigen::MatrixXd& X_test) {
  if (X_test.cols() != est.X_train.cols())
    throw std::invalid_argument("predict: dimension mismatch");
  const Eigen::Index n = est.X_train.rows();
  const Eigen::Index m = X_test.rows();

  Eigen::MatrixXd ip = X_test * est.X_train.transpose();
  Eigen::VectorXd sq_test = X_test.rowwise().squaredNorm();
  Eigen::VectorXd sq_train = est.X_train.rowwise().squaredNorm();

  Eigen::VectorXd out(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dist_sq = std::max(sq_test[i] + sq_train[j] - 2.0 * ip(i, j), 0.0);
      acc -= est.weights[j] * std::pow(dist_sq, 0.5 * est.alpha);
    }
    out[i] = acc + est.constant;
  }
  return out;
}

BandwidthLimitsReport bandwidth_limits_check(const KernelSpec& spec, double tau_small,
                                             double tau_large, const Eigen::MatrixXd& X,
                                             const Eigen::VectorXd& y) {
  if (spec.family != KernelFamily::AlphaExponential &&
      spec.family != KernelFamily::Gaussian)
    throw std::invalid_argument("bandwidth_limits_check: alpha-exponential kernels only");
  if (!(tau_small > 0.0) || !(tau_large > 0.0))
    throw std::invalid_argument("bandwidth_limits_check: tau must be positive");
  const Eigen::Index n = X.rows();

  BandwidthLimitsReport report;

  {  // narrow kernels: near-identity Gram, interpolant vanishes off the data
    const ScaledKernel narrow{spec, tau_small};
    const Eigen::MatrixXd K = gram(narrow, X);
    Eigen::MatrixXd offdiag = K;
    offdiag.diagonal().setZero();
    report.small_tau_max_offdiag = offdiag.cwiseAbs().maxCoeff();

    const FittedEstimator est = fit_ridge(narrow, X, y, 0.0);
    const Eigen::MatrixXd far = 2.0 * X;  // doubled radius, far on the tau_small scale
    report.small_tau_far_pred =
        predict(est, far).cwiseAbs().maxCoeff() / y.cwiseAbs().maxCoeff();
  }

  {  // wide kernels: Gram collapses to the all-ones rank-one matrix
    const ScaledKernel wide{spec, tau_large};
    Eigen::MatrixXd K = gram(wide, X);
    K.array() -= 1.0;
    report.large_tau_rank_one_dev = opnorm_symmetric(K) / static_cast<double>(n);
  }

  return report;
}

}  // namespace kernellab
