#ifndef KERNELLAB_KERNELS_HPP
#define KERNELLAB_KERNELS_HPP

#include <Eigen/Dense>

namespace kernellab {

// Rotationally invariant kernel families. Every family evaluates through
// g(|x|^2, |x'|^2, x.x'), so kernel values depend on the inputs only through
// norms and the inner product.
enum class KernelFamily { Gaussian, AlphaExponential, ExpInnerProduct, Ntk };

struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  double alpha = 2.0;  // AlphaExponential only, in (0, 2]
  int depth = 1;       // Ntk only, >= 1

  static KernelSpec gaussian() { return {KernelFamily::Gaussian, 2.0, 1}; }
  static KernelSpec alpha_exponential(double alpha) {
    return {KernelFamily::AlphaExponential, alpha, 1};
  }
  static KernelSpec laplace() { return alpha_exponential(1.0); }
  static KernelSpec exp_inner_product() { return {KernelFamily::ExpInnerProduct, 2.0, 1}; }
  static KernelSpec ntk(int depth) { return {KernelFamily::Ntk, 2.0, depth}; }

  void validate() const;  // throws std::invalid_argument on bad parameters
};

// Scale-dependent kernel k_tau(x, x') = g(|x|^2/tau, |x'|^2/tau, x.x'/tau):
// inputs are divided by sqrt(tau) before the family formula is applied.
struct ScaledKernel {
  KernelSpec spec;
  double tau = 1.0;
};

// Family formula on pre-scaled quantities u = |x|^2, v = |x'|^2, t = x.x'.
// This is the single evaluation path shared by eval/gram/gram_cross.
double eval_uvt(const KernelSpec& spec, double u, double v, double t);

double eval(const ScaledKernel& kernel, const Eigen::VectorXd& x,
            const Eigen::VectorXd& xp);

// K[i,j] = k(x_i, x_j) over the rows of X. The upper triangle is computed in
// a fixed row-major order and mirrored, so the result is exactly symmetric
// and bit-reproducible.
Eigen::MatrixXd gram(const ScaledKernel& kernel, const Eigen::MatrixXd& X);

// K*[i,j] = k(a_i, b_j) for rows a_i of A and b_j of B (shape A.rows x B.rows).
Eigen::MatrixXd gram_cross(const ScaledKernel& kernel, const Eigen::MatrixXd& A,
                           const Eigen::MatrixXd& B);

// Coefficient g_j(u, v) of the local power expansion
// g(u, v, t) = sum_j g_j(u, v) t^j. Closed forms exist for ExpInnerProduct
// (1/j!) and Gaussian (2^j/j! * exp(-u-v)); other families are rejected.
double series_coeff(const KernelSpec& spec, int j, double u, double v);

// ReLU NTK of a fully connected depth-L network, explicit-prefactor
// convention: c_sig = c_sigdot = 2, terminal derivative layer set to one.
//   Sigma^(0)  = x.x'
//   rho_i      = Sigma^(i-1)(x,x') / sqrt(Sigma^(i-1)(x,x) Sigma^(i-1)(x',x'))
//   Sigma^(i)  = 2 sqrt(...) t_sig(rho_i),   t_sig(r) = (sqrt(1-r^2) + r asin r)/pi
//   Sigmad^(i) = 2 t_sigdot(rho_i),          t_sigdot(r) = 1/2 + asin(r)/pi
//   k = sum_{i=1}^{L+1} Sigma^(i-1) prod_{j=i}^{L+1} Sigmad^(j),  Sigmad^(L+1) = 1.
// The step-function dual carries no norm prefactor (its activation is
// 0-homogeneous), and 2 t_sig(1) = 1 makes the diagonal recursion
// norm-preserving. rho is clamped to [-1, 1] before asin.
double ntk_eval(int depth, const Eigen::VectorXd& x, const Eigen::VectorXd& xp);

}  // namespace kernellab

#endif
