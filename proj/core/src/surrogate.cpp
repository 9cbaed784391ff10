#include "kernellab/surrogate.hpp"

#include <cmath>
#include <stdexcept>

#include "kernellab/linalg.hpp"

namespace kernellab {

namespace {

void require_expandable(const KernelSpec& spec, const char* who) {
  if (spec.family != KernelFamily::ExpInnerProduct &&
      spec.family != KernelFamily::Gaussian)
    throw std::invalid_argument(std::string(who) +
                                ": closed-form expansion only for "
                                "exp-inner-product and gaussian kernels");
}

// coeff[q](l1, l2) = g_q^(l1,l2)(c,c) / (l1! l2!) for q + l1 + l2 <= m.
// ExpInnerProduct: g_q = 1/q! independent of (u,v), all partials vanish.
// Gaussian: g_q(u,v) = 2^q/q! e^(-u-v), so each (u,v)-derivative flips sign:
// g_q^(l1,l2)(c,c) = (-1)^(l1+l2) 2^q/q! e^(-2c).
std::vector<Eigen::MatrixXd> coeff_table(const KernelSpec& spec, int m, double c) {
  std::vector<Eigen::MatrixXd> table(static_cast<std::size_t>(m) + 1);
  double gq = (spec.family == KernelFamily::Gaussian) ? std::exp(-2.0 * c) : 1.0;
  for (int q = 0; q <= m; ++q) {
    if (q > 0) gq *= (spec.family == KernelFamily::Gaussian) ? 2.0 / q : 1.0 / q;
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(m - q + 1, m - q + 1);
    double fact_l1 = 1.0;
    for (int l1 = 0; l1 <= m - q; ++l1) {
      if (l1 > 0) fact_l1 *= l1;
      double fact_l2 = 1.0;
      for (int l2 = 0; l1 + l2 <= m - q; ++l2) {
        if (l2 > 0) fact_l2 *= l2;
        if (spec.family == KernelFamily::Gaussian) {
          const double sign = ((l1 + l2) % 2 == 0) ? 1.0 : -1.0;
          block(l1, l2) = sign * gq / (fact_l1 * fact_l2);
        } else {
          block(l1, l2) = (l1 == 0 && l2 == 0) ? gq : 0.0;
        }
      }
    }
    table[static_cast<std::size_t>(q)] = std::move(block);
  }
  return table;
}

double diagonal_shift(const KernelSpec& spec, int m, double c) {
  double partial = 0.0;
  double cq = 1.0;
  for (int q = 0; q <= m; ++q) {
    partial += cq * series_coeff(spec, q, c, c);
    cq *= c;
  }
  return eval_uvt(spec, c, c, c) - partial;
}

// Per-row expansion weights: w[q] = coeff[q] * (dev^0, ..., dev^(m-q))^T,
// so that the (i, j) series term for exponent q is w_i[q] . devpow_j.
struct RowExpansion {
  std::vector<Eigen::VectorXd> w;  // indexed by q
  Eigen::VectorXd devpow;          // dev^l, l = 0..m
};

RowExpansion row_expansion(const std::vector<Eigen::MatrixXd>& table, int m,
                           double dev) {
  RowExpansion row;
  row.devpow.resize(m + 1);
  double p = 1.0;
  for (int l = 0; l <= m; ++l) {
    row.devpow[l] = p;
    p *= dev;
  }
  row.w.resize(static_cast<std::size_t>(m) + 1);
  for (int q = 0; q <= m; ++q)
    row.w[static_cast<std::size_t>(q)] =
        table[static_cast<std::size_t>(q)] * row.devpow.head(m - q + 1);
  return row;
}

double pair_value(const RowExpansion& a, const RowExpansion& b, int m, double ip) {
  double acc = 0.0;
  double ipq = 1.0;
  for (int q = 0; q <= m; ++q) {
    acc += ipq * a.w[static_cast<std::size_t>(q)].dot(b.devpow.head(m - q + 1));
    ipq *= ip;
  }
  return acc;
}

}  // namespace

int barrier_degree(double beta, BarrierDomain domain) {
  if (!(beta > 0.0)) throw std::invalid_argument("barrier_degree: beta must be positive");
  // nudge before floor so exact integer ratios are not lost to rounding
  const int base = static_cast<int>(std::floor(2.0 / beta + 1e-9));
  return domain == BarrierDomain::Covariance ? 2 * base : base;
}

double min_eig_bound(const KernelSpec& spec, int m, double c) {
  require_expandable(spec, "min_eig_bound");
  if (!(c > 0.0)) throw std::invalid_argument("min_eig_bound: c must be positive");
  if (m < 0) throw std::invalid_argument("min_eig_bound: m must be >= 0");
  return diagonal_shift(spec, m, c);
}

Eigen::MatrixXd taylor_gram(const KernelSpec& spec, const Eigen::MatrixXd& Z, int m,
                            double c) {
  require_expandable(spec, "taylor_gram");
  if (m < 0) throw std::invalid_argument("taylor_gram: m must be >= 0");
  const Eigen::Index n = Z.rows();

  Eigen::MatrixXd ip(n, n);
  ip.setZero();
  ip.selfadjointView<Eigen::Lower>().rankUpdate(Z);

  const auto table = coeff_table(spec, m, c);
  std::vector<RowExpansion> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    rows.push_back(row_expansion(table, m, ip(i, i) - c));

  const double shift = diagonal_shift(spec, m, c);

  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    M(i, i) = shift + pair_value(rows[static_cast<std::size_t>(i)],
                                 rows[static_cast<std::size_t>(i)], m, ip(i, i));
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double value = pair_value(rows[static_cast<std::size_t>(i)],
                                      rows[static_cast<std::size_t>(j)], m, ip(j, i));
      M(i, j) = value;
      M(j, i) = value;
    }
  }
  return M;
}

SurrogateGap taylor_gram_report(const KernelSpec& spec, const Eigen::MatrixXd& X,
                                double tau, int m) {
  if (!(tau > 0.0)) throw std::invalid_argument("taylor_gram_report: tau must be positive");
  const Eigen::MatrixXd Z = X / std::sqrt(tau);
  SurrogateGap gap;
  gap.c = Z.rowwise().squaredNorm().mean();
  gap.m = m;
  gap.M = taylor_gram(spec, Z, m, gap.c);
  Eigen::MatrixXd diff = gram(ScaledKernel{spec, 1.0}, Z) - gap.M;
  gap.opnorm_gap = opnorm_symmetric(diff);
  return gap;
}

SurrogateModel build_surrogate(const KernelSpec& spec, const Eigen::MatrixXd& X,
                               double tau, int m, double c) {
  require_expandable(spec, "build_surrogate");
  if (!(tau > 0.0)) throw std::invalid_argument("build_surrogate: tau must be positive");
  if (m < 0) throw std::invalid_argument("build_surrogate: m must be >= 0");
  SurrogateModel model;
  model.spec = spec;
  model.m = m;
  model.tau = tau;
  model.Z = X / std::sqrt(tau);
  model.c = (c > 0.0) ? c : model.Z.rowwise().squaredNorm().mean();
  model.coeff = coeff_table(spec, m, model.c);
  return model;
}

Eigen::VectorXd surrogate_predict(const SurrogateModel& model,
                                  const Eigen::VectorXd& dual,
                                  const Eigen::MatrixXd& X_test) {
  if (X_test.cols() != model.Z.cols())
    throw std::invalid_argument("surrogate_predict: dimension mismatch");
  if (dual.size() != model.Z.rows())
    throw std::invalid_argument("surrogate_predict: dual size mismatch");
  const Eigen::Index n = model.Z.rows();
  const int m = model.m;

  std::vector<RowExpansion> rows;
  rows.reserve(static_cast<std::size_t>(n));
  const Eigen::VectorXd sq_train = model.Z.rowwise().squaredNorm();
  for (Eigen::Index i = 0; i < n; ++i)
    rows.push_back(row_expansion(model.coeff, m, sq_train[i] - model.c));

  const Eigen::MatrixXd Z_test = X_test / std::sqrt(model.tau);
  const Eigen::MatrixXd ip = Z_test * model.Z.transpose();
  const Eigen::VectorXd sq_test = Z_test.rowwise().squaredNorm();

  Eigen::VectorXd out(Z_test.rows());
  for (Eigen::Index t = 0; t < Z_test.rows(); ++t) {
    const RowExpansion test_row = row_expansion(model.coeff, m, sq_test[t] - model.c);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      acc += dual[i] * pair_value(rows[static_cast<std::size_t>(i)], test_row, m, ip(t, i));
    out[t] = acc;
  }
  return out;
}

Eigen::VectorXd surrogate_predict(const SurrogateModel& model,
                                  const Eigen::VectorXd& f_train, double lambda,
                                  const Eigen::MatrixXd& X_test) {
  // K can be rebuilt from the stored pre-scaled inputs with tau = 1
  Eigen::MatrixXd K = gram(ScaledKernel{model.spec, 1.0}, model.Z);
  if (lambda > 0.0) K.diagonal().array() += lambda;
  const Eigen::VectorXd dual = solve_spd(K, f_train);
  return surrogate_predict(model, dual, X_test);
}

double best_poly_error(const GroundTruth& f, const Eigen::MatrixXd& samples,
                       int degree, const std::vector<int>& active_coords,
                       bool* rank_deficient_out) {
  if (degree < 0) throw std::invalid_argument("best_poly_error: negative degree");
  if (samples.rows() < 1) throw std::invalid_argument("best_poly_error: no samples");
  const int k = static_cast<int>(active_coords.size());
  for (int coord : active_coords)
    if (coord < 1 || coord > samples.cols())
      throw std::invalid_argument("best_poly_error: active coordinate out of range");

  // enumerate multi-indices with total degree <= degree (lexicographic)
  std::vector<std::vector<int>> exponents;
  std::vector<int> current(static_cast<std::size_t>(k), 0);
  const std::function<void(int, int)> enumerate = [&](int pos, int remaining) {
    if (pos == k) {
      exponents.push_back(current);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      current[static_cast<std::size_t>(pos)] = e;
      enumerate(pos + 1, remaining - e);
    }
    current[static_cast<std::size_t>(pos)] = 0;
  };
  enumerate(0, degree);

  const std::size_t basis = exponents.size();
  if (basis > 2000) throw std::invalid_argument("best_poly_error: basis larger than 2000");

  // streaming normal equations; two passes keep memory flat in sample count
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(basis, basis);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis);
  Eigen::VectorXd row(basis);
  Eigen::MatrixXd powers(static_cast<std::size_t>(k), degree + 1);

  const auto fill_row = [&](Eigen::Index s) {
    for (int j = 0; j < k; ++j) {
      const double x = samples(s, active_coords[static_cast<std::size_t>(j)] - 1);
      double p = 1.0;
      for (int e = 0; e <= degree; ++e) {
        powers(j, e) = p;
        p *= x;
      }
    }
    for (std::size_t b = 0; b < basis; ++b) {
      double value = 1.0;
      for (int j = 0; j < k; ++j)
        value *= powers(j, exponents[b][static_cast<std::size_t>(j)]);
      row[static_cast<Eigen::Index>(b)] = value;
    }
  };

  Eigen::RowVectorXd xrow(samples.cols());
  for (Eigen::Index s = 0; s < samples.rows(); ++s) {
    fill_row(s);
    G.selfadjointView<Eigen::Lower>().rankUpdate(row);
    xrow = samples.row(s);
    rhs += f(xrow) * row;
  }
  G = Eigen::MatrixXd(G.selfadjointView<Eigen::Lower>());

  // Any jitter the factorization needs marks the design as rank deficient;
  // a singular system beyond the jitter ladder gets an explicit 1e-10 ridge.
  bool rank_deficient = false;
  Eigen::VectorXd coefs;
  try {
    double jitter = 0.0;
    coefs = solve_spd(G, rhs, &jitter);
    rank_deficient = jitter > 0.0;
  } catch (const SingularMatrixError&) {
    rank_deficient = true;
    Eigen::MatrixXd regularized = G;
    regularized.diagonal().array() += 1e-10;
    coefs = solve_spd(regularized, rhs);
  }
  if (rank_deficient_out) *rank_deficient_out = rank_deficient;

  double sse = 0.0;
  for (Eigen::Index s = 0; s < samples.rows(); ++s) {
    fill_row(s);
    xrow = samples.row(s);
    const double resid = f(xrow) - row.dot(coefs);
    sse += resid * resid;
  }
  return sse / static_cast<double>(samples.rows());
}

}  // namespace kernellab
