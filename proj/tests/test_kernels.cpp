#include <doctest.h>

#include <kernellab/kernels.hpp>
#include <kernellab/linalg.hpp>
#include <kernellab/rng.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

using namespace kernellab;

namespace {

Eigen::MatrixXd random_points(int n, int d, std::uint64_t seed) {
  CounterRng rng(seed);
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = rng.normal();
  return x;
}

Eigen::VectorXd point(const Eigen::MatrixXd& pts, int i) {
  return pts.row(i).transpose();
}

std::vector<KernelSpec> all_specs() {
  return {KernelSpec::gaussian(), KernelSpec::laplace(),
          KernelSpec::alpha_exponential(0.7), KernelSpec::exp_inner_product(),
          KernelSpec::ntk(1), KernelSpec::ntk(3)};
}

}  // namespace

TEST_CASE("gaussian kernel hits closed-form values") {
  ScaledKernel k{KernelSpec::gaussian(), 1.0};
  Eigen::Vector2d x(1.0, 0.0), y(0.0, 1.0);
  CHECK(eval(k, x, x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eval(k, x, y) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  ScaledKernel k4{KernelSpec::gaussian(), 4.0};
  CHECK(eval(k4, x, y) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("alpha exponential covers laplace and matches gaussian at alpha 2") {
  Eigen::Vector3d x(0.3, -0.2, 0.5), y(1.0, 0.4, -0.1);
  double sq = (x - y).squaredNorm();
  ScaledKernel lap{KernelSpec::laplace(), 2.0};
  CHECK(eval(lap, x, y) == doctest::Approx(std::exp(-std::sqrt(sq / 2.0))).epsilon(1e-14));
  ScaledKernel a2{KernelSpec::alpha_exponential(2.0), 3.0};
  ScaledKernel gg{KernelSpec::gaussian(), 3.0};
  CHECK(eval(a2, x, y) == doctest::Approx(eval(gg, x, y)).epsilon(1e-15));
}

TEST_CASE("exp inner product kernel value") {
  Eigen::Vector2d x(2.0, 1.0), y(0.5, -1.0);
  ScaledKernel k{KernelSpec::exp_inner_product(), 2.0};
  CHECK(eval(k, x, y) == doctest::Approx(std::exp(0.0)).epsilon(1e-15));
  Eigen::Vector2d z(0.0, 0.0);
  CHECK(eval(k, x, z) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("kernels are symmetric in their arguments") {
  Eigen::MatrixXd pts = random_points(6, 4, 11);
  for (const auto& spec : all_specs()) {
    ScaledKernel k{spec, 1.7};
    for (int i = 0; i < pts.rows(); ++i)
      for (int j = 0; j < pts.rows(); ++j)
        CHECK(eval(k, point(pts, i), point(pts, j))
              == eval(k, point(pts, j), point(pts, i)));
  }
}

TEST_CASE("kernels are invariant under a common rotation") {
  Eigen::MatrixXd pts = random_points(5, 6, 21);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_points(6, 6, 22));
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd rotated = pts * q.transpose();
  for (const auto& spec : all_specs()) {
    ScaledKernel k{spec, 2.3};
    for (int i = 0; i < pts.rows(); ++i)
      for (int j = 0; j < pts.rows(); ++j) {
        double a = eval(k, point(pts, i), point(pts, j));
        double b = eval(k, point(rotated, i), point(rotated, j));
        CHECK(a == doctest::Approx(b).epsilon(1e-10));
      }
  }
}

TEST_CASE("scaling tau is the same as pre-scaling the inputs") {
  Eigen::MatrixXd pts = random_points(4, 3, 33);
  double tau = 5.5;
  Eigen::MatrixXd scaled = pts / std::sqrt(tau);
  for (const auto& spec : all_specs()) {
    ScaledKernel kt{spec, tau};
    ScaledKernel k1{spec, 1.0};
    for (int i = 0; i < pts.rows(); ++i)
      for (int j = 0; j < pts.rows(); ++j) {
        double a = eval(kt, point(pts, i), point(pts, j));
        double b = eval(k1, point(scaled, i), point(scaled, j));
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
      }
  }
}

TEST_CASE("gram matches pairwise eval and is PSD for every family") {
  Eigen::MatrixXd pts = random_points(25, 5, 44);
  for (const auto& spec : all_specs()) {
    ScaledKernel k{spec, 3.1};
    Eigen::MatrixXd g = gram(k, pts);
    REQUIRE(g.rows() == 25);
    REQUIRE(g.cols() == 25);
    for (int i = 0; i < 25; ++i)
      for (int j = 0; j <= i; ++j) {
        CHECK(g(i, j)
              == doctest::Approx(eval(k, point(pts, i), point(pts, j))).epsilon(1e-12));
        CHECK(g(i, j) == g(j, i));
      }
    Eigen::VectorXd w = eig_symmetric(g);
    double scale = g.diagonal().maxCoeff();
    CHECK(w(0) >= -1e-10 * 25 * scale);
  }
}

TEST_CASE("gram is deterministic bit for bit") {
  Eigen::MatrixXd pts = random_points(12, 4, 55);
  ScaledKernel k{KernelSpec::ntk(2), 2.0};
  Eigen::MatrixXd a = gram(k, pts);
  Eigen::MatrixXd b = gram(k, pts);
  CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
}

TEST_CASE("gram_cross agrees with entrywise eval") {
  Eigen::MatrixXd xa = random_points(7, 3, 66);
  Eigen::MatrixXd xb = random_points(5, 3, 67);
  for (const auto& spec : all_specs()) {
    ScaledKernel k{spec, 1.9};
    Eigen::MatrixXd c = gram_cross(k, xa, xb);
    REQUIRE(c.rows() == 7);
    REQUIRE(c.cols() == 5);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 5; ++j)
        CHECK(c(i, j)
              == doctest::Approx(eval(k, point(xa, i), point(xb, j))).epsilon(1e-12));
  }
}

TEST_CASE("eval validates its inputs") {
  ScaledKernel k{KernelSpec::gaussian(), 1.0};
  Eigen::VectorXd x(2), y3(3);
  x << 1.0, 2.0;
  y3 << 1.0, 2.0, 3.0;
  CHECK_THROWS_AS(eval(k, x, y3), std::invalid_argument);
  ScaledKernel bad{KernelSpec::gaussian(), 0.0};
  CHECK_THROWS_AS(eval(bad, x, x), std::invalid_argument);
  Eigen::VectorXd nan_pt(2);
  nan_pt << std::nan(""), 0.0;
  CHECK_THROWS_AS(eval(k, nan_pt, x), std::invalid_argument);
}

TEST_CASE("kernel spec validation") {
  CHECK_THROWS_AS(KernelSpec::alpha_exponential(0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec::alpha_exponential(2.5).validate(), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec::ntk(0).validate(), std::invalid_argument);
  CHECK_NOTHROW(KernelSpec::alpha_exponential(2.0).validate());
  CHECK_NOTHROW(KernelSpec::ntk(5).validate());
}

TEST_CASE("series coefficients for the expandable families") {
  KernelSpec exp_ip = KernelSpec::exp_inner_product();
  CHECK(series_coeff(exp_ip, 3, 0.4, 0.9) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(series_coeff(exp_ip, 0, 2.0, 5.0) == doctest::Approx(1.0).epsilon(1e-15));
  KernelSpec gauss = KernelSpec::gaussian();
  CHECK(series_coeff(gauss, 1, 0.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(series_coeff(gauss, 2, 0.5, 0.25)
        == doctest::Approx(2.0 * std::exp(-0.75)).epsilon(1e-14));
  CHECK_THROWS_AS(series_coeff(KernelSpec::ntk(1), 0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(series_coeff(KernelSpec::laplace(), 0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(series_coeff(gauss, -1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("truncated series reproduces the kernel for small t") {
  for (const auto& spec : {KernelSpec::gaussian(), KernelSpec::exp_inner_product()}) {
    for (double u : {0.3, 1.0}) {
      for (double v : {0.5, 1.2}) {
        for (double t : {-0.4, 0.1, 0.45}) {
          double direct = eval_uvt(spec, u, v, t);
          double sum = 0.0;
          double tp = 1.0;
          for (int j = 0; j <= 30; ++j) {
            sum += series_coeff(spec, j, u, v) * tp;
            tp *= t;
          }
          CHECK(sum == doctest::Approx(direct).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("ntk kernel matches independently computed reference values") {
  Eigen::Vector3d x(0.6, -0.3, 1.2), y(-0.2, 0.9, 0.4);
  CHECK(eval({KernelSpec::ntk(1), 1.0}, x, y)
        == doctest::Approx(0.97517435716471788).epsilon(1e-13));
  CHECK(eval({KernelSpec::ntk(2), 1.0}, x, y)
        == doctest::Approx(2.4702477729301776).epsilon(1e-13));
  CHECK(eval({KernelSpec::ntk(3), 1.0}, x, y)
        == doctest::Approx(5.0127316260024658).epsilon(1e-13));
  CHECK(eval({KernelSpec::ntk(2), 2.5}, x, y)
        == doctest::Approx(0.98809910917207105).epsilon(1e-13));
}

TEST_CASE("ntk diagonal values grow geometrically with depth") {
  Eigen::Vector3d x(0.6, -0.3, 1.2);
  double sq = x.squaredNorm();
  for (int depth : {1, 2, 3, 4}) {
    ScaledKernel k{KernelSpec::ntk(depth), 1.0};
    double expected = (std::pow(2.0, depth + 1) - 1.0) * sq;
    CHECK(eval(k, x, x) == doctest::Approx(expected).epsilon(1e-12));
  }
  Eigen::Vector3d e1(1.0, 0.0, 0.0);
  CHECK(eval({KernelSpec::ntk(1), 1.0}, e1, e1) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(eval({KernelSpec::ntk(2), 1.0}, e1, e1) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(eval({KernelSpec::ntk(4), 1.0}, e1, e1) == doctest::Approx(31.0).epsilon(1e-14));
}

TEST_CASE("ntk rejects zero-norm inputs") {
  ScaledKernel k{KernelSpec::ntk(2), 1.0};
  Eigen::Vector2d z(0.0, 0.0), x(1.0, 0.5);
  CHECK_THROWS_AS(eval(k, z, x), std::invalid_argument);
  CHECK_THROWS_AS(eval(k, x, z), std::invalid_argument);
}

TEST_CASE("ntk handles antipodal and collinear points without NaNs") {
  Eigen::Vector2d x(0.8, -0.6);
  Eigen::Vector2d neg = -x;
  Eigen::Vector2d stretched = 2.0 * x;
  for (int depth : {1, 2, 5}) {
    ScaledKernel k{KernelSpec::ntk(depth), 1.0};
    CHECK(std::isfinite(eval(k, x, neg)));
    CHECK(std::isfinite(eval(k, x, stretched)));
    // Collinear same-direction points keep the correlation at its maximum.
    // asin has an infinite-slope cusp at +-1, so allow a wide tolerance here.
    CHECK(eval(k, x, stretched) == doctest::Approx(2.0 * eval(k, x, x)).epsilon(1e-7));
  }
}

TEST_CASE("ntk_eval agrees with the scaled kernel at tau 1") {
  Eigen::Vector3d x(0.6, -0.3, 1.2), y(-0.2, 0.9, 0.4);
  for (int depth : {1, 2, 3}) {
    CHECK(ntk_eval(depth, x, y) == eval({KernelSpec::ntk(depth), 1.0}, x, y));
  }
}
