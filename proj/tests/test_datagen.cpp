#include <doctest.h>

#include <kernellab/datagen.hpp>
#include <kernellab/rng.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <cstring>
#include <stdexcept>

using namespace kernellab;

namespace {

DistributionSpec gaussian_identity(int d, double beta) {
  return DistributionSpec{CovarianceModel::identity(d), EntryLaw::StandardNormal,
                          Projection::None, beta};
}

}  // namespace

TEST_CASE("effective dimension of simple covariance models") {
  CHECK(effective_dimension(CovarianceModel::identity(50)) == doctest::Approx(50.0));
  Eigen::VectorXd diag(3);
  diag << 1.0, 0.5, 0.5;
  CHECK(effective_dimension(CovarianceModel::explicit_diagonal(diag))
        == doctest::Approx(2.0));
}

TEST_CASE("explicit diagonal validation") {
  Eigen::VectorXd good(3);
  good << 1.0, 0.25, 0.1;
  CHECK_NOTHROW(CovarianceModel::explicit_diagonal(good));
  Eigen::VectorXd no_unit(2);
  no_unit << 0.9, 0.5;  // largest entry must be exactly 1
  CHECK_THROWS_AS(CovarianceModel::explicit_diagonal(no_unit), std::invalid_argument);
  Eigen::VectorXd negative(2);
  negative << 1.0, -0.1;
  CHECK_THROWS_AS(CovarianceModel::explicit_diagonal(negative), std::invalid_argument);
}

TEST_CASE("kappa_solve round trips the target effective dimension") {
  double kappa = kappa_solve(100, 10.0);
  CovarianceModel m = CovarianceModel::diagonal_power_law(100, kappa);
  CHECK(effective_dimension(m) == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(m.diag().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.diag().minCoeff() > 0.0);

  double kappa2 = kappa_solve(64, 8.0);
  CovarianceModel m2 = CovarianceModel::diagonal_power_law(64, kappa2);
  CHECK(std::abs(effective_dimension(m2) - 8.0) <= 1e-5);
}

TEST_CASE("power law diagonal is nonincreasing and starts at 1") {
  CovarianceModel m = CovarianceModel::diagonal_power_law(40, 1.7);
  Eigen::VectorXd diag = m.diag();
  CHECK(diag(0) == doctest::Approx(1.0));
  for (int i = 1; i < diag.size(); ++i) CHECK(diag(i) <= diag(i - 1) + 1e-15);
}

TEST_CASE("kappa_solve rejects unattainable targets") {
  CHECK_THROWS_AS(kappa_solve(10, 11.0), std::invalid_argument);
  CHECK_THROWS_AS(kappa_solve(10, 0.5), std::invalid_argument);
}

TEST_CASE("sampling is deterministic given a seed") {
  DistributionSpec spec = gaussian_identity(20, 0.5);
  Eigen::MatrixXd a = sample(spec, 30, 20, 1234);
  Eigen::MatrixXd b = sample(spec, 30, 20, 1234);
  CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
  Eigen::MatrixXd c = sample(spec, 30, 20, 1235);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("sample validates the dimension against the covariance") {
  DistributionSpec spec = gaussian_identity(20, 0.5);
  CHECK_THROWS_AS(sample(spec, 10, 21, 1), std::invalid_argument);
}

TEST_CASE("sphere projection pins every row norm to the effective dimension") {
  DistributionSpec spec = gaussian_identity(17, 0.5);
  spec.projection = Projection::Sphere;
  Eigen::MatrixXd x = sample(spec, 40, 17, 99);
  for (int i = 0; i < x.rows(); ++i)
    CHECK(x.row(i).squaredNorm() == doctest::Approx(17.0).epsilon(1e-12));
}

TEST_CASE("gaussian identity sample has the expected second moments") {
  DistributionSpec spec = gaussian_identity(100, 0.5);
  Eigen::MatrixXd x = sample(spec, 10000, 100, 7);
  double mean_sq = x.array().square().rowwise().sum().mean();
  CHECK(mean_sq == doctest::Approx(100.0).epsilon(0.03));
  CHECK(std::abs(x.mean()) < 0.01);
}

TEST_CASE("uniform entry law has matching variance and bounded support") {
  DistributionSpec spec{CovarianceModel::identity(50), EntryLaw::UniformUnitVariance,
                        Projection::None, 0.5};
  Eigen::MatrixXd x = sample(spec, 4000, 50, 11);
  CHECK(x.cwiseAbs().maxCoeff() <= std::sqrt(3.0) + 1e-12);
  double var = x.array().square().mean();
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
  // The fourth moment separates uniform draws (9/5) from gaussian ones (3).
  double m4 = x.array().pow(4).mean();
  CHECK(m4 == doctest::Approx(1.8).epsilon(0.05));
}

TEST_CASE("anisotropic covariance scales the coordinates") {
  Eigen::VectorXd diag(4);
  diag << 1.0, 0.25, 0.04, 0.01;
  DistributionSpec spec{CovarianceModel::explicit_diagonal(diag),
                        EntryLaw::StandardNormal, Projection::None, 0.5};
  Eigen::MatrixXd x = sample(spec, 20000, 4, 3);
  for (int j = 0; j < 4; ++j) {
    double var = x.col(j).array().square().mean();
    CHECK(var == doctest::Approx(diag(j)).epsilon(0.06));
  }
}

TEST_CASE("ground truth evaluators") {
  Eigen::RowVectorXd x(4);
  x << 0.5, -1.0, 2.0, 0.25;
  GroundTruth coord = GroundTruth::monomial(1.0, 1, 1);
  CHECK(coord(x) == doctest::Approx(0.5));
  GroundTruth cubed = GroundTruth::monomial(2.0, 1, 3);
  CHECK(cubed(x) == doctest::Approx(2.0 * 0.125));
  GroundTruth second = GroundTruth::monomial(1.0, 3, 2);
  CHECK(second(x) == doctest::Approx(4.0));
  GroundTruth sine = GroundTruth::sine_first_coord();
  CHECK(sine(x) == doctest::Approx(std::sin(M_PI)).epsilon(1e-12));
  GroundTruth fn = GroundTruth::custom([](const Eigen::RowVectorXd& p) {
    return p.sum();
  });
  CHECK(fn(x) == doctest::Approx(1.75));
}

TEST_CASE("sparse quadratic plus linear target uses the documented coordinates") {
  // 0.5 (x_3^2 + x_5^2 + x_7^2 + x_9^2) - (x_2 + x_4 + x_6 + x_8), 1-based.
  Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(10);
  x(2) = 2.0;  // coordinate 3, quadratic: contributes 0.5 * 4
  x(1) = 1.5;  // coordinate 2, linear: contributes -1.5
  GroundTruth f = GroundTruth::sparse_quad_lin();
  CHECK(f(x) == doctest::Approx(2.0 - 1.5));
  Eigen::RowVectorXd ones = Eigen::RowVectorXd::Ones(10);
  CHECK(f(ones) == doctest::Approx(4 * 0.5 - 4.0));
  Eigen::RowVectorXd small = Eigen::RowVectorXd::Ones(5);
  CHECK_THROWS_AS(f(small), std::invalid_argument);
}

TEST_CASE("matrix evaluation matches rowwise evaluation") {
  GroundTruth f = GroundTruth::monomial(0.5, 2, 2);
  Eigen::MatrixXd x(3, 3);
  x << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0;
  Eigen::VectorXd y = f(x);
  for (int i = 0; i < 3; ++i)
    CHECK(y(i) == doctest::Approx(f(Eigen::RowVectorXd(x.row(i)))));
}

TEST_CASE("concentration check accepts sphere data and reports zero norm deviation") {
  DistributionSpec spec = gaussian_identity(30, 0.5);
  spec.projection = Projection::Sphere;
  Eigen::MatrixXd x = sample(spec, 200, 30, 5);
  ConcentrationReport rep = concentration_check(x, 0.5, 1.0, 30.0);
  CHECK(rep.max_norm_dev <= 1e-12);
  double expected_bound = std::pow(200.0, -0.25) * std::log(200.0);
  CHECK(rep.bound == doctest::Approx(expected_bound).epsilon(1e-12));
}

TEST_CASE("concentration check flags duplicated rows") {
  DistributionSpec spec = gaussian_identity(30, 0.5);
  Eigen::MatrixXd one = sample(spec, 1, 30, 17);
  Eigen::MatrixXd dup(2, 30);
  dup.row(0) = one.row(0);
  dup.row(1) = one.row(0);
  ConcentrationReport rep = concentration_check(dup, 0.5, 1.0, 30.0);
  CHECK_FALSE(rep.satisfied);
  CHECK(rep.max_offdiag_inner > rep.bound);
}

TEST_CASE("concentration check holds for honest gaussian draws at moderate size") {
  int d = static_cast<int>(std::pow(500.0, 0.5));
  DistributionSpec spec = gaussian_identity(d, 0.5);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Eigen::MatrixXd x = sample(spec, 500, d, seed);
    ConcentrationReport rep = concentration_check(x, 0.5, 1.0, spec.covariance.trace());
    CHECK(rep.satisfied);
  }
}

TEST_CASE("beta outside its range is rejected") {
  DistributionSpec bad = gaussian_identity(10, 0.0);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.beta = 2.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.beta = 2.0;
  CHECK_NOTHROW(bad.validate());
}
