#ifndef KERNELLAB_LINALG_HPP
#define KERNELLAB_LINALG_HPP

#include <Eigen/Dense>
#include <stdexcept>

namespace kernellab {

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cholesky factorization of a symmetric positive definite matrix with an
// escalating diagonal jitter ladder: first attempt with no jitter, then
// 1e-12 * trace/n doubling up to 1e-6 * trace/n. Any jitter actually applied
// is recorded and must be surfaced by callers, never swallowed.
class SpdFactor {
 public:
  static SpdFactor compute(const Eigen::MatrixXd& A);

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& B) const;

  double jitter() const { return jitter_; }
  Eigen::Index dim() const { return factor_.rows(); }

 private:
  SpdFactor() = default;
  Eigen::MatrixXd factor_;  // lower-triangular Cholesky factor, LAPACK layout
  double jitter_ = 0.0;
};

// One-shot solves. jitter_out (if non-null) receives the jitter applied.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                          double* jitter_out = nullptr);
Eigen::MatrixXd solve_spd(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          double* jitter_out = nullptr);

// Bunch-Kaufman (pivoted LDL^T) solve for symmetric, possibly indefinite A.
// Backs the bordered saddle-point system of the spline interpolator.
Eigen::VectorXd solve_symmetric_indefinite(const Eigen::MatrixXd& A,
                                           const Eigen::VectorXd& b);

// All eigenvalues of a symmetric matrix, ascending. The overload with
// `vectors` fills columns with the corresponding orthonormal eigenvectors.
Eigen::VectorXd eig_symmetric(const Eigen::MatrixXd& A);
Eigen::VectorXd eig_symmetric(const Eigen::MatrixXd& A, Eigen::MatrixXd& vectors);

// Entrywise i-th power; i = 0 yields the all-ones matrix.
Eigen::MatrixXd hadamard_power(const Eigen::MatrixXd& A, int i);

// Spectral norm (largest |eigenvalue|) of a symmetric matrix via power
// iteration with a fixed pseudo-random start vector; deterministic for a
// fixed input. Cheaper than a full eigensolve at n ~ 4000.
double opnorm_symmetric(const Eigen::MatrixXd& A);

}  // namespace kernellab

#endif
