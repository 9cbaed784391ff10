#include "kernellab/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kernellab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

double t_sig(double rho) {
  return (std::sqrt(1.0 - rho * rho) + rho * std::asin(rho)) / kPi;
}

double t_sigdot(double rho) { return 0.5 + std::asin(rho) / kPi; }

double clamp_corr(double rho) { return std::min(1.0, std::max(-1.0, rho)); }

// NTK recursion on (u, v, t); both diagonals are invariant across layers
// because 2 t_sig(1) = 1.
double ntk_uvt(int depth, double u, double v, double t) {
  if (u <= 0.0 || v <= 0.0)
    throw std::invalid_argument("ntk: zero-norm input, correlation undefined");
  const double nn = std::sqrt(u * v);
  double sig = t;  // Sigma^(i)(x,x'), starts at i = 0
  // accumulate k = sum_i Sigma^(i-1) prod_{j>=i} Sigmad^(j) right-to-left:
  // maintain S = sum over levels seen so far, multiplied by each new Sigmad.
  double acc = 0.0;
  for (int i = 1; i <= depth; ++i) {
    const double rho = clamp_corr(sig / nn);
    acc = (acc + sig) * (2.0 * t_sigdot(rho));
    sig = 2.0 * nn * t_sig(rho);
  }
  return acc + sig;  // terminal derivative layer is identically one
}

double alpha_exp_uvt(double alpha, double u, double v, double t) {
  double dist_sq = u + v - 2.0 * t;
  if (alpha == 2.0) return std::exp(-dist_sq);
  // The squared distance is computed by cancellation, so near-coincident
  // points land anywhere within ~eps * (u + v) of zero. The fractional power
  // has an infinite derivative at zero and would amplify that noise (to 1e-4
  // at alpha = 0.5), so anything below the rounding floor is treated as an
  // exact match. Guards tiny negatives as well.
  if (dist_sq <= 64.0 * std::numeric_limits<double>::epsilon() * (u + v))
    dist_sq = 0.0;
  return std::exp(-std::pow(dist_sq, 0.5 * alpha));
}

}  // namespace

void KernelSpec::validate() const {
  switch (family) {
    case KernelFamily::AlphaExponential:
      if (!(alpha > 0.0) || !(alpha <= 2.0))
        throw std::invalid_argument("KernelSpec: alpha must lie in (0, 2]");
      break;
    case KernelFamily::Ntk:
      if (depth < 1) throw std::invalid_argument("KernelSpec: depth must be >= 1");
      break;
    default:
      break;
  }
}

double eval_uvt(const KernelSpec& spec, double u, double v, double t) {
  switch (spec.family) {
    case KernelFamily::Gaussian:
      return std::exp(-(u + v - 2.0 * t));
    case KernelFamily::AlphaExponential:
      return alpha_exp_uvt(spec.alpha, u, v, t);
    case KernelFamily::ExpInnerProduct:
      return std::exp(t);
    case KernelFamily::Ntk:
      return ntk_uvt(spec.depth, u, v, t);
  }
  throw std::logic_error("eval_uvt: unknown family");
}

double eval(const ScaledKernel& kernel, const Eigen::VectorXd& x,
            const Eigen::VectorXd& xp) {
  kernel.spec.validate();
  if (!(kernel.tau > 0.0)) throw std::invalid_argument("eval: tau must be positive");
  if (x.size() != xp.size()) throw std::invalid_argument("eval: dimension mismatch");
  if (!x.allFinite() || !xp.allFinite())
    throw std::invalid_argument("eval: non-finite input");
  const double inv_tau = 1.0 / kernel.tau;
  return eval_uvt(kernel.spec, x.squaredNorm() * inv_tau, xp.squaredNorm() * inv_tau,
                  x.dot(xp) * inv_tau);
}

Eigen::MatrixXd gram(const ScaledKernel& kernel, const Eigen::MatrixXd& X) {
  kernel.spec.validate();
  if (!(kernel.tau > 0.0)) throw std::invalid_argument("gram: tau must be positive");
  if (!X.allFinite()) throw std::invalid_argument("gram: non-finite input");
  const Eigen::Index n = X.rows();
  const double inv_tau = 1.0 / kernel.tau;

  // one GEMM for all inner products, then the scalar family formula entrywise
  Eigen::MatrixXd ip(n, n);
  ip.setZero();
  ip.selfadjointView<Eigen::Lower>().rankUpdate(X);
  Eigen::VectorXd sq = ip.diagonal() * inv_tau;

  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    K(i, i) = eval_uvt(kernel.spec, sq[i], sq[i], sq[i]);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double value = eval_uvt(kernel.spec, sq[i], sq[j], ip(j, i) * inv_tau);
      K(i, j) = value;
      K(j, i) = value;
    }
  }
  return K;
}

Eigen::MatrixXd gram_cross(const ScaledKernel& kernel, const Eigen::MatrixXd& A,
                           const Eigen::MatrixXd& B) {
  kernel.spec.validate();
  if (!(kernel.tau > 0.0)) throw std::invalid_argument("gram_cross: tau must be positive");
  if (A.cols() != B.cols()) throw std::invalid_argument("gram_cross: dimension mismatch");
  if (!A.allFinite() || !B.allFinite())
    throw std::invalid_argument("gram_cross: non-finite input");
  const double inv_tau = 1.0 / kernel.tau;

  Eigen::MatrixXd ip = A * B.transpose();
  Eigen::VectorXd sqa = A.rowwise().squaredNorm() * inv_tau;
  Eigen::VectorXd sqb = B.rowwise().squaredNorm() * inv_tau;

  Eigen::MatrixXd K(A.rows(), B.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.rows(); ++j)
      K(i, j) = eval_uvt(kernel.spec, sqa[i], sqb[j], ip(i, j) * inv_tau);
  return K;
}

double series_coeff(const KernelSpec& spec, int j, double u, double v) {
  if (j < 0) throw std::invalid_argument("series_coeff: negative index");
  switch (spec.family) {
    case KernelFamily::ExpInnerProduct: {
      double fact = 1.0;
      for (int l = 2; l <= j; ++l) fact *= l;
      return 1.0 / fact;
    }
    case KernelFamily::Gaussian: {
      double coeff = std::exp(-u - v);
      for (int l = 1; l <= j; ++l) coeff *= 2.0 / l;
      return coeff;
    }
    default:
      throw std::invalid_argument(
          "series_coeff: no closed-form expansion for this family");
  }
}

double ntk_eval(int depth, const Eigen::VectorXd& x, const Eigen::VectorXd& xp) {
  if (depth < 1) throw std::invalid_argument("ntk_eval: depth must be >= 1");
  if (x.size() != xp.size()) throw std::invalid_argument("ntk_eval: dimension mismatch");
  return ntk_uvt(depth, x.squaredNorm(), xp.squaredNorm(), x.dot(xp));
}

}  // namespace kernellab
