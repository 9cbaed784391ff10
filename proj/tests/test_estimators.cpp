#include <doctest.h>

#include <kernellab/estimators.hpp>
#include <kernellab/kernels.hpp>
#include <kernellab/rng.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

using namespace kernellab;

namespace {

Eigen::MatrixXd random_points(int n, int d, std::uint64_t seed) {
  CounterRng rng(seed);
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = rng.normal();
  return x;
}

Eigen::VectorXd random_vector(int n, std::uint64_t seed) {
  CounterRng rng(seed);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = rng.normal();
  return y;
}

}  // namespace

TEST_CASE("ridge fit on a single point matches the closed form") {
  ScaledKernel k{KernelSpec::gaussian(), 1.0};
  Eigen::MatrixXd x(1, 1);
  x << 0.5;
  Eigen::VectorXd y(1);
  y << 2.0;
  double lambda = 0.3;
  FittedEstimator est = fit_ridge(k, x, y, lambda);
  CHECK(est.dual(0) == doctest::Approx(2.0 / 1.3).epsilon(1e-14));
  Eigen::MatrixXd xs(1, 1);
  xs << 1.0;
  Eigen::VectorXd pred = predict(est, xs);
  CHECK(pred(0) == doctest::Approx(std::exp(-0.25) * 2.0 / 1.3).epsilon(1e-13));
}

TEST_CASE("minimum-norm interpolant reproduces the training targets") {
  Eigen::MatrixXd x = random_points(50, 3, 1);
  Eigen::VectorXd y = random_vector(50, 2);
  ScaledKernel k{KernelSpec::laplace(), 3.0};
  FittedEstimator est = fit_ridge(k, x, y, 0.0);
  CHECK(est.jitter_used == 0.0);
  Eigen::VectorXd pred = predict(est, x);
  CHECK((pred - y).lpNorm<Eigen::Infinity>() <= 1e-6 * y.lpNorm<Eigen::Infinity>());
}

TEST_CASE("very large regularization shrinks predictions to zero") {
  Eigen::MatrixXd x = random_points(20, 2, 3);
  Eigen::VectorXd y = random_vector(20, 4);
  ScaledKernel k{KernelSpec::gaussian(), 2.0};
  FittedEstimator est = fit_ridge(k, x, y, 1e12);
  Eigen::VectorXd pred = predict(est, x);
  CHECK(pred.lpNorm<Eigen::Infinity>() <= 1e-6 * y.lpNorm<Eigen::Infinity>());
}

TEST_CASE("fit and predict are linear in the targets") {
  Eigen::MatrixXd x = random_points(25, 3, 5);
  Eigen::VectorXd y1 = random_vector(25, 6);
  Eigen::VectorXd y2 = random_vector(25, 7);
  Eigen::MatrixXd xs = random_points(10, 3, 8);
  ScaledKernel k{KernelSpec::gaussian(), 3.0};
  KernelSystem system(k, x, 0.1);
  Eigen::VectorXd pa = predict(system.fit(y1), xs);
  Eigen::VectorXd pb = predict(system.fit(y2), xs);
  Eigen::VectorXd pc = predict(system.fit(y1 + 2.0 * y2), xs);
  CHECK((pc - pa - 2.0 * pb).lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("KernelSystem reproduces fit_ridge") {
  Eigen::MatrixXd x = random_points(30, 4, 9);
  Eigen::VectorXd y = random_vector(30, 10);
  ScaledKernel k{KernelSpec::exp_inner_product(), 4.0};
  KernelSystem system(k, x, 0.5);
  FittedEstimator a = system.fit(y);
  FittedEstimator b = fit_ridge(k, x, y, 0.5);
  CHECK((a.dual - b.dual).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(system.gram_matrix().rows() == 30);
}

TEST_CASE("duplicated rows at lambda zero surface as reported jitter") {
  Eigen::MatrixXd x(2, 2);
  x << 1.0, 0.0, 1.0, 0.0;
  Eigen::VectorXd y(2);
  y << 1.0, 1.0;
  ScaledKernel k{KernelSpec::gaussian(), 1.0};
  FittedEstimator est = fit_ridge(k, x, y, 0.0);
  CHECK(est.jitter_used > 0.0);
}

TEST_CASE("training predictions never exceed the targets in euclidean norm") {
  Eigen::MatrixXd x = random_points(40, 3, 11);
  Eigen::VectorXd y = random_vector(40, 12);
  ScaledKernel k{KernelSpec::gaussian(), 3.0};
  for (double lambda : {0.0, 1e-4, 1e-2, 1.0, 100.0}) {
    FittedEstimator est = fit_ridge(k, x, y, lambda);
    Eigen::VectorXd pred = predict(est, x);
    CHECK(pred.norm() <= y.norm() * (1.0 + 1e-9));
  }
}

TEST_CASE("rkhs norm closed form on one point and scaling law") {
  ScaledKernel k{KernelSpec::gaussian(), 2.0};
  Eigen::MatrixXd x(1, 2);
  x << 0.3, -0.4;
  Eigen::VectorXd y(1);
  y << 3.0;
  FittedEstimator est = fit_ridge(k, x, y, 0.0);
  // interpolating one point: |f|^2 = y^2 / k(x,x) and k(x,x) = 1 here
  CHECK(rkhs_norm(est) == doctest::Approx(9.0).epsilon(1e-12));

  Eigen::MatrixXd xs = random_points(15, 2, 13);
  Eigen::VectorXd ys = random_vector(15, 14);
  FittedEstimator base = fit_ridge(k, xs, ys, 0.01);
  FittedEstimator scaled = fit_ridge(k, xs, Eigen::VectorXd(2.5 * ys), 0.01);
  CHECK(rkhs_norm(scaled) == doctest::Approx(6.25 * rkhs_norm(base)).epsilon(1e-10));

  FittedEstimator zero = fit_ridge(k, xs, Eigen::VectorXd::Zero(15), 0.01);
  CHECK(rkhs_norm(zero) == 0.0);
}

TEST_CASE("rkhs norm is nonincreasing in the regularization strength") {
  Eigen::MatrixXd x = random_points(30, 3, 15);
  Eigen::VectorXd y = random_vector(30, 16);
  ScaledKernel k{KernelSpec::laplace(), 3.0};
  double previous = std::numeric_limits<double>::infinity();
  for (double lambda : {0.0, 1e-6, 1e-4, 1e-2, 1.0, 100.0}) {
    double norm = rkhs_norm(fit_ridge(k, x, y, lambda));
    CHECK(norm <= previous * (1.0 + 1e-10));
    previous = norm;
  }
}

TEST_CASE("flat-limit spline interpolates and its weights sum to zero") {
  Eigen::MatrixXd x = random_points(20, 2, 17);
  Eigen::VectorXd y = random_vector(20, 18);
  SplineEstimator est = fit_flat_limit(1.0, x, y);
  CHECK(std::abs(est.weights.sum()) <= 1e-9 * est.weights.cwiseAbs().sum() + 1e-12);
  Eigen::VectorXd pred = predict(est, x);
  CHECK((pred - y).lpNorm<Eigen::Infinity>() <= 1e-6 * y.lpNorm<Eigen::Infinity>());
}

TEST_CASE("flat-limit spline on constant targets is the constant") {
  Eigen::MatrixXd x = random_points(12, 3, 19);
  Eigen::VectorXd y = Eigen::VectorXd::Constant(12, 4.2);
  SplineEstimator est = fit_flat_limit(1.3, x, y);
  CHECK(est.weights.cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(est.constant == doctest::Approx(4.2).epsilon(1e-9));
  Eigen::MatrixXd xs = random_points(5, 3, 20);
  Eigen::VectorXd pred = predict(est, xs);
  for (int i = 0; i < 5; ++i) CHECK(pred(i) == doctest::Approx(4.2).epsilon(1e-9));
}

TEST_CASE("flat-limit spline validates its inputs") {
  Eigen::MatrixXd x = random_points(5, 2, 21);
  Eigen::VectorXd y = random_vector(5, 22);
  CHECK_THROWS_AS(fit_flat_limit(0.0, x, y), std::invalid_argument);
  CHECK_THROWS_AS(fit_flat_limit(2.0, x, y), std::invalid_argument);
  Eigen::MatrixXd dup(3, 2);
  dup << 1.0, 2.0, 0.5, 0.5, 1.0, 2.0;
  Eigen::VectorXd y3 = random_vector(3, 23);
  CHECK_THROWS_AS(fit_flat_limit(1.0, dup, y3), std::invalid_argument);
}

TEST_CASE("flat-limit spline predictions are scale invariant") {
  Eigen::MatrixXd x = random_points(15, 2, 24);
  Eigen::VectorXd y = random_vector(15, 25);
  Eigen::MatrixXd xs = random_points(8, 2, 26);
  double s = 7.3;
  SplineEstimator base = fit_flat_limit(1.0, x, y);
  SplineEstimator scaled = fit_flat_limit(1.0, Eigen::MatrixXd(s * x), y);
  Eigen::VectorXd pa = predict(base, xs);
  Eigen::VectorXd pb = predict(scaled, Eigen::MatrixXd(s * xs));
  CHECK((pa - pb).lpNorm<Eigen::Infinity>() <= 1e-8 * pa.lpNorm<Eigen::Infinity>());
}

TEST_CASE("flat-limit spline is the wide-bandwidth limit of the interpolant") {
  Eigen::MatrixXd x = random_points(30, 2, 27);
  Eigen::VectorXd y = random_vector(30, 28);
  Eigen::MatrixXd xs = random_points(20, 2, 29);
  SplineEstimator spline = fit_flat_limit(1.0, x, y);
  Eigen::VectorXd ps = predict(spline, xs);
  ScaledKernel wide{KernelSpec::laplace(), 1e8};
  FittedEstimator est = fit_ridge(wide, x, y, 0.0);
  Eigen::VectorXd pk = predict(est, xs);
  double scale = ps.lpNorm<Eigen::Infinity>();
  CHECK((ps - pk).lpNorm<Eigen::Infinity>() <= 1e-3 * scale);
}

TEST_CASE("bandwidth limits report captures both degeneracies") {
  Eigen::MatrixXd x = random_points(20, 5, 30);
  Eigen::VectorXd y = random_vector(20, 31);
  BandwidthLimitsReport rep =
      bandwidth_limits_check(KernelSpec::laplace(), 1e-6, 5.0e9, x, y);
  CHECK(rep.small_tau_max_offdiag <= 1e-10);
  CHECK(rep.small_tau_far_pred <= 1e-8);
  CHECK(rep.large_tau_rank_one_dev <= 1e-3);
}

TEST_CASE("moderate bandwidth shows neither degeneracy") {
  Eigen::MatrixXd x = random_points(20, 5, 32);
  Eigen::VectorXd y = random_vector(20, 33);
  BandwidthLimitsReport rep = bandwidth_limits_check(KernelSpec::laplace(), 5.0, 5.0, x, y);
  CHECK(rep.small_tau_max_offdiag > 1e-3);
  CHECK(rep.large_tau_rank_one_dev > 1e-2);
}
