#ifndef KERNELLAB_SURROGATE_HPP
#define KERNELLAB_SURROGATE_HPP

#include <Eigen/Dense>
#include <vector>

#include "kernellab/datagen.hpp"
#include "kernellab/kernels.hpp"

namespace kernellab {

// Polynomial-approximation-barrier machinery: in the high-dimensional regime
// the kernel estimator behaves like a polynomial of total degree at most m,
// where m depends only on the effective-dimension growth exponent beta.

enum class BarrierDomain { Covariance, Sphere };

// m = 2 floor(2/beta) for covariance-type data, floor(2/beta) on the sphere.
int barrier_degree(double beta, BarrierDomain domain);

// Analytic lower-bound value g(c,c,c) - sum_{i=0}^m c^i g_i(c,c) for the
// smallest Gram eigenvalue (the concentration slack gamma is excluded).
// Supported families: ExpInnerProduct, Gaussian.
double min_eig_bound(const KernelSpec& spec, int m, double c);

// Degree-m Taylor surrogate of the Gram matrix on pre-scaled inputs Z
// (rows z_i = x_i / sqrt(tau)), expanded around the concentration point c:
//   M_ij = delta_ij (g(c,c,c) - sum_{q<=m} g_q(c,c) c^q)
//        + sum_{q<=m} (z_i . z_j)^q
//          sum_{l1+l2<=m-q} g_q^(l1,l2)(c,c)/(l1! l2!) (|z_i|^2-c)^l1 (|z_j|^2-c)^l2
// Exactly symmetric by construction.
Eigen::MatrixXd taylor_gram(const KernelSpec& spec, const Eigen::MatrixXd& Z, int m,
                            double c);

struct SurrogateGap {
  Eigen::MatrixXd M;
  double c = 0.0;
  int m = 0;
  double opnorm_gap = 0.0;  // |K - M|_op
};

// Builds both the true Gram matrix and its Taylor surrogate on X / sqrt(tau)
// with c = mean squared row norm, and reports |K - M|_op.
SurrogateGap taylor_gram_report(const KernelSpec& spec, const Eigen::MatrixXd& X,
                                double tau, int m);

// Surrogate prediction polynomial. For the estimator with dual coefficients
// (K + lambda I)^{-1} y, the surrogate replaces the exact kernel vector by
// its degree-m expansion, making p_hat a polynomial of total degree <= m in
// the test point.
struct SurrogateModel {
  KernelSpec spec;
  int m = 0;
  double c = 1.0;
  double tau = 1.0;
  Eigen::MatrixXd Z;  // training inputs, pre-scaled by 1/sqrt(tau)
  // coeff[q](l1, l2) = g_q^(l1,l2)(c,c) / (l1! l2!), for q + l1 + l2 <= m
  std::vector<Eigen::MatrixXd> coeff;
};

// c defaults to the empirical mean of |z_i|^2 (pass c > 0 to override, e.g.
// exactly 1 for sphere-projected data).
SurrogateModel build_surrogate(const KernelSpec& spec, const Eigen::MatrixXd& X,
                               double tau, int m, double c = -1.0);

// p_hat(x*) = dual^T M*(x*) with dual = (K + lambda I)^{-1} y_train.
Eigen::VectorXd surrogate_predict(const SurrogateModel& model,
                                  const Eigen::VectorXd& dual,
                                  const Eigen::MatrixXd& X_test);

// Convenience overload that forms the dual itself from training targets.
Eigen::VectorXd surrogate_predict(const SurrogateModel& model,
                                  const Eigen::VectorXd& f_train, double lambda,
                                  const Eigen::MatrixXd& X_test);

// Monte Carlo estimate of the squared L2 distance between f and the closest
// polynomial of total degree <= degree in the given (1-based) coordinates:
// least squares of f(samples) onto the monomial basis, returning the mean
// squared residual. The basis size C(k + degree, k) must stay <= 2000. A
// rank-deficient design is solved through ridge-regularized (1e-10) normal
// equations and flagged via rank_deficient_out.
double best_poly_error(const GroundTruth& f, const Eigen::MatrixXd& samples,
                       int degree, const std::vector<int>& active_coords,
                       bool* rank_deficient_out = nullptr);

}  // namespace kernellab

#endif
