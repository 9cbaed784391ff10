#include "kernellab/datagen.hpp"

#include <cmath>
#include <stdexcept>

#include "kernellab/rng.hpp"

namespace kernellab {

namespace {

Eigen::VectorXd power_law_diag(int d, double kappa) {
  Eigen::VectorXd diag(d);
  for (int i = 0; i < d; ++i) {
    const double ratio = static_cast<double>(i) / d;  // (i-1)/d for 1-based i
    diag[i] = std::pow(1.0 - std::pow(ratio, kappa), 1.0 / kappa);
  }
  return diag;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

CovarianceModel CovarianceModel::identity(int d) {
  CovarianceModel cov;
  cov.kind = Kind::Identity;
  cov.d = d;
  cov.validate();
  return cov;
}

CovarianceModel CovarianceModel::diagonal_power_law(int d, double kappa) {
  CovarianceModel cov;
  cov.kind = Kind::DiagonalPowerLaw;
  cov.d = d;
  cov.kappa = kappa;
  cov.validate();
  return cov;
}

CovarianceModel CovarianceModel::explicit_diagonal(Eigen::VectorXd diag) {
  CovarianceModel cov;
  cov.kind = Kind::Explicit;
  cov.d = static_cast<int>(diag.size());
  cov.explicit_diag = std::move(diag);
  cov.validate();
  return cov;
}

Eigen::VectorXd CovarianceModel::diag() const {
  switch (kind) {
    case Kind::Identity:
      return Eigen::VectorXd::Ones(d);
    case Kind::DiagonalPowerLaw:
      return power_law_diag(d, kappa);
    case Kind::Explicit:
      return explicit_diag;
  }
  throw std::logic_error("CovarianceModel: unknown kind");
}

double CovarianceModel::trace() const { return diag().sum(); }

void CovarianceModel::validate() const {
  if (d < 1) throw std::invalid_argument("CovarianceModel: d must be >= 1");
  if (kind == Kind::DiagonalPowerLaw && !(kappa > 0.0))
    throw std::invalid_argument("CovarianceModel: kappa must be positive");
  const Eigen::VectorXd entries = diag();
  if (entries.size() != d)
    throw std::invalid_argument("CovarianceModel: diagonal size mismatch");
  // operator norm pinned to 1: all entries in (0, 1], largest equal to 1
  if (!(entries.minCoeff() > 0.0) || entries.maxCoeff() > 1.0 + 1e-12)
    throw std::invalid_argument("CovarianceModel: entries must lie in (0, 1]");
  if (std::abs(entries.maxCoeff() - 1.0) > 1e-9)
    throw std::invalid_argument("CovarianceModel: largest entry must equal 1");
}

double effective_dimension(const CovarianceModel& cov) {
  cov.validate();
  return cov.trace();  // operator norm is 1
}

double kappa_solve(int d, double target_trace) {
  if (d < 1) throw std::invalid_argument("kappa_solve: d must be >= 1");
  if (!(target_trace >= 1.0) || !(target_trace <= static_cast<double>(d)))
    throw std::invalid_argument("kappa_solve: target trace outside [1, d]");

  constexpr double kLo = 1e-6;
  constexpr double kHi = 1e6;
  const double tol = 1e-6 * target_trace;
  const auto trace_at = [d](double kappa) { return power_law_diag(d, kappa).sum(); };

  // trace is monotone increasing in kappa: check caps first
  if (trace_at(kLo) >= target_trace - tol) return kLo;
  if (trace_at(kHi) <= target_trace + tol) return kHi;

  double lo = kLo, hi = kHi;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double tr = trace_at(mid);
    if (std::abs(tr - target_trace) <= tol) return mid;
    if (tr < target_trace)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void DistributionSpec::validate() const {
  covariance.validate();
  if (!(beta > 0.0) || !(beta <= 2.0))
    throw std::invalid_argument("DistributionSpec: beta must lie in (0, 2]");
}

Eigen::MatrixXd sample(const DistributionSpec& spec, int n, int d, std::uint64_t seed) {
  spec.validate();
  if (n < 1 || d < 1) throw std::invalid_argument("sample: n and d must be >= 1");
  if (spec.covariance.d != d)
    throw std::invalid_argument("sample: covariance dimension mismatch");

  const Eigen::VectorXd scale = spec.covariance.diag().cwiseSqrt();
  const double sqrt3 = std::sqrt(3.0);

  CounterRng rng(seed);
  Eigen::MatrixXd X(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      const double w = (spec.entry_law == EntryLaw::StandardNormal)
                           ? rng.normal()
                           : rng.uniform(-sqrt3, sqrt3);
      X(i, j) = scale[j] * w;
    }
  }

  if (spec.projection == Projection::Sphere) {
    const double radius = std::sqrt(spec.covariance.trace());
    for (int i = 0; i < n; ++i) {
      const double norm = X.row(i).norm();
      if (norm == 0.0) throw std::runtime_error("sample: zero row cannot be projected");
      X.row(i) *= radius / norm;
    }
  }
  return X;
}

GroundTruth GroundTruth::monomial(double coeff, int coordinate, int power) {
  if (coordinate < 1) throw std::invalid_argument("GroundTruth: coordinates are 1-based");
  if (power < 0) throw std::invalid_argument("GroundTruth: negative power");
  GroundTruth f;
  f.kind = Kind::Monomial;
  f.coeff = coeff;
  f.coordinate = coordinate;
  f.power = power;
  return f;
}

GroundTruth GroundTruth::sine_first_coord(double frequency) {
  GroundTruth f;
  f.kind = Kind::SineFirstCoord;
  f.frequency = frequency;
  return f;
}

GroundTruth GroundTruth::sparse_quad_lin() {
  GroundTruth f;
  f.kind = Kind::SparseQuadLin;
  return f;
}

GroundTruth GroundTruth::custom(std::function<double(const Eigen::RowVectorXd&)> fn) {
  GroundTruth f;
  f.kind = Kind::Custom;
  f.evaluator = std::move(fn);
  return f;
}

double GroundTruth::operator()(const Eigen::RowVectorXd& x) const {
  switch (kind) {
    case Kind::Monomial: {
      if (coordinate > x.size())
        throw std::invalid_argument("GroundTruth: coordinate exceeds dimension");
      double value = coeff;
      const double base = x[coordinate - 1];
      for (int p = 0; p < power; ++p) value *= base;
      return value;
    }
    case Kind::SineFirstCoord:
      return std::sin(kTwoPi * frequency * x[0]);
    case Kind::SparseQuadLin: {
      if (x.size() < 9)
        throw std::invalid_argument("GroundTruth: sparse_quad_lin needs d >= 9");
      double quad = 0.0, lin = 0.0;
      for (int i = 1; i <= 4; ++i) {
        quad += x[2 * i] * x[2 * i];  // x_{2i+1}, 0-based index 2i
        lin += x[2 * i - 1];          // x_{2i},   0-based index 2i-1
      }
      return 0.5 * quad - lin;
    }
    case Kind::Custom:
      return evaluator(x);
  }
  throw std::logic_error("GroundTruth: unknown kind");
}

Eigen::VectorXd GroundTruth::operator()(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd y(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    y[i] = (*this)(Eigen::RowVectorXd(X.row(i)));
  return y;
}

ConcentrationReport concentration_check(const Eigen::MatrixXd& X, double beta,
                                        double epsilon, double trace_sigma) {
  const Eigen::Index n = X.rows();
  if (n < 2) throw std::invalid_argument("concentration_check: need n >= 2");
  if (!(trace_sigma > 0.0))
    throw std::invalid_argument("concentration_check: trace must be positive");

  Eigen::MatrixXd ip(n, n);
  ip.setZero();
  ip.selfadjointView<Eigen::Lower>().rankUpdate(X);

  ConcentrationReport report;
  report.epsilon = epsilon;
  for (Eigen::Index i = 0; i < n; ++i) {
    report.max_norm_dev =
        std::max(report.max_norm_dev, std::abs(ip(i, i) / trace_sigma - 1.0));
    for (Eigen::Index j = i + 1; j < n; ++j)
      report.max_offdiag_inner =
          std::max(report.max_offdiag_inner, std::abs(ip(j, i)) / trace_sigma);
  }
  const double logn = std::log(static_cast<double>(n));
  report.bound = std::pow(static_cast<double>(n), -0.5 * beta) *
                 std::pow(logn, 0.5 * (1.0 + epsilon));
  report.satisfied =
      report.max_offdiag_inner <= report.bound && report.max_norm_dev <= report.bound;
  return report;
}

}  // namespace kernellab
