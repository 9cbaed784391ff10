#include "kernellab/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <vector>

#include "kernellab/rng.hpp"

namespace kernellab {

SpdFactor SpdFactor::compute(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("SpdFactor: matrix not square");
  const lapack_int n = static_cast<lapack_int>(A.rows());
  if (n == 0) throw std::invalid_argument("SpdFactor: empty matrix");

  const double base = A.trace() / static_cast<double>(n);
  const double max_jitter = 1e-6 * base;

  double jitter = 0.0;
  while (true) {
    Eigen::MatrixXd work = A;
    if (jitter > 0.0) work.diagonal().array() += jitter;
    const lapack_int info =
        LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, work.data(), n);
    if (info == 0) {
      SpdFactor f;
      f.factor_ = std::move(work);
      f.jitter_ = jitter;
      return f;
    }
    if (info < 0) throw std::runtime_error("dpotrf: illegal argument");
    if (jitter == 0.0) {
      jitter = 1e-12 * base;
      if (jitter <= 0.0) break;  // non-positive trace, ladder cannot start
    } else {
      jitter *= 2.0;
    }
    if (jitter > max_jitter) break;
  }
  throw SingularMatrixError("solve_spd: factorization failed at maximum jitter");
}

Eigen::MatrixXd SpdFactor::solve(const Eigen::MatrixXd& B) const {
  const lapack_int n = static_cast<lapack_int>(factor_.rows());
  if (B.rows() != factor_.rows()) throw std::invalid_argument("SpdFactor::solve: size mismatch");
  Eigen::MatrixXd X = B;
  const lapack_int info =
      LAPACKE_dpotrs(LAPACK_COL_MAJOR, 'L', n, static_cast<lapack_int>(X.cols()),
                     factor_.data(), n, X.data(), n);
  if (info != 0) throw std::runtime_error("dpotrs failed");
  return X;
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& b) const {
  return solve(Eigen::MatrixXd(b)).col(0);
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                          double* jitter_out) {
  SpdFactor f = SpdFactor::compute(A);
  if (jitter_out) *jitter_out = f.jitter();
  return f.solve(b);
}

Eigen::MatrixXd solve_spd(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          double* jitter_out) {
  SpdFactor f = SpdFactor::compute(A);
  if (jitter_out) *jitter_out = f.jitter();
  return f.solve(B);
}

Eigen::VectorXd solve_symmetric_indefinite(const Eigen::MatrixXd& A,
                                           const Eigen::VectorXd& b) {
  if (A.rows() != A.cols()) throw std::invalid_argument("solve_symmetric_indefinite: matrix not square");
  if (A.rows() != b.size()) throw std::invalid_argument("solve_symmetric_indefinite: size mismatch");
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Eigen::MatrixXd work = A;
  Eigen::VectorXd x = b;
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dsysv(LAPACK_COL_MAJOR, 'L', n, 1, work.data(), n,
                                        ipiv.data(), x.data(), n);
  if (info > 0) throw SingularMatrixError("solve_symmetric_indefinite: matrix is singular");
  if (info < 0) throw std::runtime_error("dsysv: illegal argument");
  return x;
}

Eigen::VectorXd eig_symmetric(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("eig_symmetric: matrix not square");
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Eigen::MatrixXd work = A;
  Eigen::VectorXd values(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, values.data());
  if (info != 0) throw std::runtime_error("dsyevd failed");
  return values;  // LAPACK returns ascending order
}

Eigen::VectorXd eig_symmetric(const Eigen::MatrixXd& A, Eigen::MatrixXd& vectors) {
  if (A.rows() != A.cols()) throw std::invalid_argument("eig_symmetric: matrix not square");
  const lapack_int n = static_cast<lapack_int>(A.rows());
  vectors = A;
  Eigen::VectorXd values(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, vectors.data(), n, values.data());
  if (info != 0) throw std::runtime_error("dsyevd failed");
  return values;
}

Eigen::MatrixXd hadamard_power(const Eigen::MatrixXd& A, int i) {
  if (i < 0) throw std::invalid_argument("hadamard_power: negative exponent");
  if (i == 0) return Eigen::MatrixXd::Ones(A.rows(), A.cols());
  Eigen::MatrixXd out = A;
  for (int k = 1; k < i; ++k) out = out.cwiseProduct(A);
  return out;
}

double opnorm_symmetric(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("opnorm_symmetric: matrix not square");
  const Eigen::Index n = A.rows();
  if (n == 0) return 0.0;

  CounterRng rng(0x6b6c6f706e6f726dull);  // fixed start vector, deterministic output
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
  double vnorm = v.norm();
  if (vnorm == 0.0) v.setOnes(), vnorm = std::sqrt(static_cast<double>(n));
  v /= vnorm;

  double estimate = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    Eigen::VectorXd w = A.selfadjointView<Eigen::Lower>() * v;
    const double next = w.norm();  // = |lambda|_max asymptotically
    if (next == 0.0) return 0.0;
    v = w / next;
    if (iter > 0 && std::abs(next - estimate) <= 1e-9 * std::max(1.0, next)) {
      return next;
    }
    estimate = next;
  }
  return estimate;
}

}  // namespace kernellab
