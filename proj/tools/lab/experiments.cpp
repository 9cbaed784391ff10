#include "lab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <new>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>

#include <kernellab/estimators.hpp>
#include <kernellab/linalg.hpp>
#include <kernellab/rng.hpp>
#include <kernellab/surrogate.hpp>

#include "lab/csv.hpp"
#include "lab/svg.hpp"

namespace kernellab::lab {
namespace {

using SteadyClock = std::chrono::steady_clock;

// Sampling-site tags for derive_seed. Grid point i draws through
// kTagPointBase + i and then re-derives its own train/test/fold seeds.
constexpr std::uint64_t kTagTrain = 1;
constexpr std::uint64_t kTagTest = 2;
constexpr std::uint64_t kTagFolds = 3;
constexpr std::uint64_t kTagNoiseBase = 16;
constexpr std::uint64_t kTagPointBase = 1000;

double elapsed_s(SteadyClock::time_point t0) {
  return std::chrono::duration<double>(SteadyClock::now() - t0).count();
}

double resolve_tau(const KernelConfig& kernel, double d_eff) {
  if (kernel.tau > 0.0) return kernel.tau;
  if (!(d_eff > 0.0)) throw std::invalid_argument("cannot default tau: d_eff <= 0");
  return d_eff;
}

// Short, comma-free token for the CSV error column.
std::string error_code(const std::exception& e) {
  if (dynamic_cast<const SingularMatrixError*>(&e) != nullptr) return "singular_matrix";
  if (dynamic_cast<const std::bad_alloc*>(&e) != nullptr) return "out_of_memory";
  if (dynamic_cast<const std::range_error*>(&e) != nullptr) return "nonfinite";
  if (dynamic_cast<const std::invalid_argument*>(&e) != nullptr)
    return "invalid_argument";
  return "numeric_error";
}

// Work items must not throw; every point wraps its body in try/catch and
// records the failure in its own row.
void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
    });
  for (auto& t : pool) t.join();
}

Eigen::VectorXd make_noise(const NoiseConfig& noise, int n, std::uint64_t seed) {
  Eigen::VectorXd eps = Eigen::VectorXd::Zero(n);
  if (noise.kind == NoiseConfig::Kind::None) return eps;
  CounterRng rng(seed);
  if (noise.kind == NoiseConfig::Kind::Uniform) {
    for (int i = 0; i < n; ++i) eps(i) = rng.uniform(-noise.amplitude, noise.amplitude);
  } else {
    for (int i = 0; i < n; ++i) eps(i) = noise.sigma * rng.normal();
  }
  return eps;
}

// Fisher-Yates over the index range, then contiguous blocks of the shuffle.
// Depends only on (n, k, seed), so every caller with the same seed sees the
// same assignment.
std::vector<std::vector<int>> make_folds(int n, int k, std::uint64_t seed) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  CounterRng rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
    std::swap(idx[i], idx[j]);
  }
  std::vector<std::vector<int>> folds(static_cast<std::size_t>(k));
  for (int f = 0; f < k; ++f) {
    const int lo = f * n / k;
    const int hi = (f + 1) * n / k;
    folds[f].assign(idx.begin() + lo, idx.begin() + hi);
  }
  return folds;
}

double pooled_cv_risk(const Eigen::MatrixXd& K, const Eigen::VectorXd& y,
                      const std::vector<std::vector<int>>& folds, double lambda) {
  const int n = static_cast<int>(K.rows());
  std::vector<char> held(static_cast<std::size_t>(n));
  double sse = 0.0;
  for (const auto& fold : folds) {
    if (fold.empty()) continue;
    std::fill(held.begin(), held.end(), 0);
    for (int i : fold) held[static_cast<std::size_t>(i)] = 1;
    std::vector<int> train;
    train.reserve(static_cast<std::size_t>(n) - fold.size());
    for (int i = 0; i < n; ++i)
      if (!held[static_cast<std::size_t>(i)]) train.push_back(i);
    if (train.empty()) throw std::invalid_argument("cross-validation fold covers all rows");

    Eigen::MatrixXd A = K(train, train);
    A.diagonal().array() += lambda;
    const Eigen::VectorXd dual = solve_spd(A, Eigen::VectorXd(y(train)));
    const Eigen::VectorXd pred = Eigen::MatrixXd(K(fold, train)) * dual;
    sse += (pred - Eigen::VectorXd(y(fold))).squaredNorm();
  }
  return sse / static_cast<double>(n);
}

double chosen_lambda(const ScaledKernel& kernel, const Eigen::MatrixXd& X,
                     const Eigen::VectorXd& y, const LambdaPolicy& policy,
                     std::uint64_t fold_seed) {
  switch (policy.kind) {
    case LambdaPolicy::Kind::Zero:
      return 0.0;
    case LambdaPolicy::Kind::Fixed:
      return policy.value;
    case LambdaPolicy::Kind::CrossValidated:
      return cross_validate_lambda(kernel, X, y, policy, fold_seed).lambda;
  }
  throw std::logic_error("unreachable lambda policy");
}

BiasRow failed_row(double grid_value, int d, const std::exception& e) {
  BiasRow row;
  row.grid_value = grid_value;
  row.d = d;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.bias = row.bias_norm = row.b0 = row.se = nan;
  row.error = error_code(e);
  return row;
}

// Fit on (X, y), score against the clean targets on the test sample. The
// caller fills grid_value, d, and runtime_s.
BiasRow measure_bias(const ScaledKernel& kernel, const Eigen::MatrixXd& X,
                     const Eigen::VectorXd& y, const Eigen::MatrixXd& Xt,
                     const Eigen::VectorXd& fstar, const LambdaPolicy& policy,
                     std::uint64_t fold_seed) {
  BiasRow row;
  const double lambda = chosen_lambda(kernel, X, y, policy, fold_seed);
  const FittedEstimator est = fit_ridge(kernel, X, y, lambda);
  const Eigen::VectorXd pred = predict(est, Xt);
  const Eigen::ArrayXd sq = (pred - fstar).array().square();
  row.bias = sq.mean();
  row.b0 = fstar.array().square().mean();
  row.bias_norm = row.b0 > 0.0 ? row.bias / row.b0 : 0.0;
  if (sq.size() > 1) {
    const double var =
        (sq - row.bias).square().sum() / static_cast<double>(sq.size() - 1);
    row.se = std::sqrt(var / static_cast<double>(sq.size()));
  }
  if (!std::isfinite(row.bias) || !std::isfinite(row.b0))
    throw std::range_error("nonfinite bias estimate");
  return row;
}

Eigen::MatrixXd draw_inputs(const ResolvedInput& in, int n, std::uint64_t seed) {
  return in.cube ? sample_unit_cube(n, in.d, seed) : sample(in.spec, n, in.d, seed);
}

int resolved_n_test(const ExperimentConfig& cfg) {
  return cfg.n_test > 0 ? cfg.n_test : 5 * cfg.n;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return CounterRng::mix(seed + 0x9e3779b97f4a7c15ull * (tag + 1));
}

Eigen::MatrixXd sample_unit_cube(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1)
    throw std::invalid_argument("sample_unit_cube: n and d must be positive");
  CounterRng rng(seed);
  Eigen::MatrixXd X(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) X(i, j) = rng.uniform01();
  return X;
}

ResolvedInput resolve_input(const InputConfig& input, double beta, int n) {
  if (n < 1) throw std::invalid_argument("resolve_input: n must be positive");
  ResolvedInput out;
  switch (input.preset) {
    case InputConfig::Preset::P1:
    case InputConfig::Preset::P2: {
      if (!(beta > 0.0) || beta > 2.0)
        throw std::invalid_argument("resolve_input: beta outside (0, 2]");
      const int d = std::max(
          1, static_cast<int>(std::floor(std::pow(static_cast<double>(n), beta) + 1e-9)));
      out.d = d;
      out.d_eff = d;
      out.spec.covariance = CovarianceModel::identity(d);
      out.spec.entry_law = EntryLaw::StandardNormal;
      out.spec.projection = input.preset == InputConfig::Preset::P2
                                ? Projection::Sphere
                                : Projection::None;
      out.spec.beta = beta;
      break;
    }
    case InputConfig::Preset::P3: {
      if (!(beta > 0.0) || beta > 2.0)
        throw std::invalid_argument("resolve_input: beta outside (0, 2]");
      // Ambient dimension stays n; only the covariance trace follows beta.
      const double target = std::pow(static_cast<double>(n), beta);
      const double kappa = kappa_solve(n, target);
      out.d = n;
      out.spec.covariance = CovarianceModel::diagonal_power_law(n, kappa);
      out.spec.entry_law = EntryLaw::UniformUnitVariance;
      out.spec.projection = Projection::None;
      out.spec.beta = beta;
      out.d_eff = out.spec.covariance.trace();
      break;
    }
    case InputConfig::Preset::UnitCube: {
      if (input.d < 1) throw std::invalid_argument("resolve_input: cube needs d >= 1");
      out.cube = true;
      out.d = input.d;
      out.d_eff = input.d;
      out.spec.covariance = CovarianceModel::identity(input.d);
      out.spec.beta = 1.0;
      break;
    }
    case InputConfig::Preset::Explicit: {
      out.spec = input.explicit_spec;
      out.d = out.spec.covariance.d;
      out.d_eff = out.spec.covariance.trace();
      break;
    }
  }
  return out;
}

CvChoice cross_validate_lambda(const ScaledKernel& kernel, const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y, const LambdaPolicy& policy,
                               std::uint64_t fold_seed) {
  const int n = static_cast<int>(X.rows());
  if (n < 2) throw std::invalid_argument("cross-validation needs n >= 2");
  const int k = std::min(5, n);
  const auto folds = make_folds(n, k, fold_seed);
  const Eigen::MatrixXd K = gram(kernel, X);

  if (policy.kind == LambdaPolicy::Kind::Zero)
    return {0.0, pooled_cv_risk(K, y, folds, 0.0)};
  if (policy.kind == LambdaPolicy::Kind::Fixed)
    return {policy.value, pooled_cv_risk(K, y, folds, policy.value)};

  const double scale = K.trace() / static_cast<double>(n);
  std::vector<double> grid{0.0};
  for (int p = -8; p <= 2; ++p) grid.push_back(std::pow(10.0, p) * scale);

  CvChoice best{0.0, std::numeric_limits<double>::infinity()};
  for (double lambda : grid) {
    const double risk = pooled_cv_risk(K, y, folds, lambda);
    if (risk < best.risk) best = {lambda, risk};
  }
  return best;
}

std::vector<BiasRow> beta_sweep(const ExperimentConfig& cfg, unsigned jobs) {
  std::vector<BiasRow> rows(cfg.beta_grid.size());
  const int n_test = resolved_n_test(cfg);
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    const double beta = cfg.beta_grid[i];
    const auto t0 = SteadyClock::now();
    int d = 0;
    try {
      const ResolvedInput in = resolve_input(cfg.input, beta, cfg.n);
      d = in.d;
      const ScaledKernel kernel{cfg.kernel.spec, resolve_tau(cfg.kernel, in.d_eff)};
      const std::uint64_t ps = derive_seed(cfg.seed, kTagPointBase + i);
      const Eigen::MatrixXd X = draw_inputs(in, cfg.n, derive_seed(ps, kTagTrain));
      const Eigen::MatrixXd Xt = draw_inputs(in, n_test, derive_seed(ps, kTagTest));
      const Eigen::VectorXd y = cfg.ground_truth(X);
      const Eigen::VectorXd fs = cfg.ground_truth(Xt);
      rows[i] =
          measure_bias(kernel, X, y, Xt, fs, cfg.lambda, derive_seed(ps, kTagFolds));
      rows[i].grid_value = beta;
      rows[i].d = d;
    } catch (const std::exception& e) {
      rows[i] = failed_row(beta, d, e);
    }
    rows[i].runtime_s = elapsed_s(t0);
  });
  return rows;
}

std::vector<BiasRow> tau_sweep(const ExperimentConfig& cfg, unsigned jobs) {
  // One data draw shared by the whole grid: the sweep isolates the effect of
  // the bandwidth, not sampling noise.
  const ResolvedInput in = resolve_input(cfg.input, cfg.input.beta, cfg.n);
  const int n_test = resolved_n_test(cfg);
  const std::uint64_t ps = derive_seed(cfg.seed, kTagPointBase);
  const Eigen::MatrixXd X = draw_inputs(in, cfg.n, derive_seed(ps, kTagTrain));
  const Eigen::MatrixXd Xt = draw_inputs(in, n_test, derive_seed(ps, kTagTest));
  const Eigen::VectorXd y = cfg.ground_truth(X);
  const Eigen::VectorXd fs = cfg.ground_truth(Xt);

  std::vector<BiasRow> rows(cfg.tau_grid.size());
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    const double tau = cfg.tau_grid[i];
    const auto t0 = SteadyClock::now();
    try {
      const ScaledKernel kernel{cfg.kernel.spec, tau};
      rows[i] =
          measure_bias(kernel, X, y, Xt, fs, cfg.lambda, derive_seed(ps, kTagFolds));
      rows[i].grid_value = tau;
      rows[i].d = in.d;
    } catch (const std::exception& e) {
      rows[i] = failed_row(tau, in.d, e);
    }
    rows[i].runtime_s = elapsed_s(t0);
  });
  return rows;
}

std::vector<SliceRow> slice_trace(const ExperimentConfig& cfg) {
  const int d = cfg.d;
  const Eigen::MatrixXd X = sample_unit_cube(cfg.n, d, derive_seed(cfg.seed, kTagTrain));
  const Eigen::VectorXd y = cfg.ground_truth(X);
  const ScaledKernel kernel{cfg.kernel.spec,
                            resolve_tau(cfg.kernel, static_cast<double>(d))};
  const double lambda =
      chosen_lambda(kernel, X, y, cfg.lambda, derive_seed(cfg.seed, kTagFolds));
  const FittedEstimator est = fit_ridge(kernel, X, y, lambda);

  // Probe points (alpha, 1/2, ..., 1/2): the cube midpoint in every
  // coordinate except the first, which runs over [0, 1].
  const int pts = cfg.slice_points;
  Eigen::MatrixXd S(pts, d);
  S.setConstant(0.5);
  for (int i = 0; i < pts; ++i)
    S(i, 0) = static_cast<double>(i) / static_cast<double>(pts - 1);

  const Eigen::VectorXd fhat = predict(est, S);
  const Eigen::VectorXd fs = cfg.ground_truth(S);
  std::vector<SliceRow> rows(static_cast<std::size_t>(pts));
  for (int i = 0; i < pts; ++i) rows[static_cast<std::size_t>(i)] = {S(i, 0), fhat(i), fs(i)};
  return rows;
}

std::vector<BiasVarianceRow> bias_variance(const ExperimentConfig& cfg, unsigned jobs) {
  const int n = cfg.n;
  const int n_test = resolved_n_test(cfg);
  const int repeats = cfg.repeats;
  const int d_max = *std::max_element(cfg.d_grid.begin(), cfg.d_grid.end());

  // One master draw at the largest dimension; the d-dimensional design is
  // its leading columns, so growing d appends irrelevant coordinates to the
  // same points. Noise is indexed by repeat only and reused across d, which
  // pairs the comparisons along the grid.
  DistributionSpec master;
  master.covariance = CovarianceModel::identity(d_max);
  master.beta = 1.0;
  const Eigen::MatrixXd X_full = sample(master, n, d_max, derive_seed(cfg.seed, kTagTrain));
  const Eigen::MatrixXd Xt_full =
      sample(master, n_test, d_max, derive_seed(cfg.seed, kTagTest));
  Eigen::MatrixXd noise(n, repeats);
  for (int r = 0; r < repeats; ++r)
    noise.col(r) = make_noise(cfg.noise, n, derive_seed(cfg.seed, kTagNoiseBase +
                                                                      static_cast<std::uint64_t>(r)));

  std::vector<BiasVarianceRow> rows(cfg.d_grid.size());
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    const int d = cfg.d_grid[i];
    rows[i].d = d;
    try {
      const Eigen::MatrixXd Xd = X_full.leftCols(d);
      const Eigen::MatrixXd Xtd = Xt_full.leftCols(d);
      const Eigen::VectorXd y_clean = cfg.ground_truth(Xd);
      const Eigen::VectorXd fs = cfg.ground_truth(Xtd);
      const ScaledKernel kernel{cfg.kernel.spec,
                                resolve_tau(cfg.kernel, static_cast<double>(d))};
      double lambda = 0.0;
      if (cfg.lambda.kind == LambdaPolicy::Kind::CrossValidated) {
        // select once per dimension, on the first noisy draw
        lambda = cross_validate_lambda(kernel, Xd, y_clean + noise.col(0), cfg.lambda,
                                       derive_seed(cfg.seed, kTagFolds))
                     .lambda;
      } else {
        lambda = cfg.lambda.kind == LambdaPolicy::Kind::Fixed ? cfg.lambda.value : 0.0;
      }

      KernelSystem system(kernel, Xd, lambda);
      const Eigen::MatrixXd cross = gram_cross(kernel, Xtd, Xd);
      Eigen::MatrixXd preds(n_test, repeats);
      for (int r = 0; r < repeats; ++r) {
        const FittedEstimator est = system.fit(y_clean + noise.col(r));
        preds.col(r) = cross * est.dual;
      }
      const Eigen::VectorXd mean_pred = preds.rowwise().mean();
      rows[i].bias = (mean_pred - fs).squaredNorm() / static_cast<double>(n_test);
      const Eigen::MatrixXd centered = preds.colwise() - mean_pred;
      rows[i].variance = centered.array().square().rowwise().sum().mean() /
                         static_cast<double>(repeats - 1);
      if (!std::isfinite(rows[i].bias) || !std::isfinite(rows[i].variance))
        throw std::range_error("nonfinite bias-variance estimate");
    } catch (const std::exception& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      rows[i].bias = rows[i].variance = nan;
      rows[i].error = error_code(e);
    }
  });
  return rows;
}

std::vector<FeatselRow> greedy_feature_selection(const ExperimentConfig& cfg) {
  const ResolvedInput in = resolve_input(cfg.input, cfg.input.beta, cfg.n);
  const int n = cfg.n;
  const int d = in.d;
  Eigen::MatrixXd X = draw_inputs(in, n, derive_seed(cfg.seed, kTagTrain));
  Eigen::VectorXd y = cfg.ground_truth(X);
  y += make_noise(cfg.noise, n, derive_seed(cfg.seed, kTagNoiseBase));

  // Candidate columns and the target are put on a common scale before any
  // risk is computed; selection must not reward a feature for its raw
  // magnitude.
  for (int j = 0; j < d; ++j) {
    const double s = X.col(j).lpNorm<1>();
    if (s > 0.0) X.col(j) /= s;
  }
  {
    const double s = y.lpNorm<1>();
    if (s > 0.0) y /= s;
  }

  const int budget = cfg.budget == 0 ? d : std::min(cfg.budget, d);
  const std::uint64_t fold_seed = derive_seed(cfg.seed, kTagFolds);

  std::vector<FeatselRow> rows;
  rows.reserve(static_cast<std::size_t>(budget));
  std::vector<int> selected;
  std::vector<int> remaining(static_cast<std::size_t>(d));
  std::iota(remaining.begin(), remaining.end(), 0);

  for (int step = 1; step <= budget; ++step) {
    double best_risk = std::numeric_limits<double>::infinity();
    int best_j = -1;
    std::vector<int> cols = selected;
    cols.push_back(-1);
    for (int j : remaining) {
      cols.back() = j;
      const Eigen::MatrixXd Xs = X(Eigen::all, cols);
      double tau = cfg.kernel.tau;
      if (!(tau > 0.0)) {
        // empirical effective dimension of the active subspace; the l1
        // rescaling above makes any fixed default meaningless
        tau = Xs.squaredNorm() / static_cast<double>(n);
        if (!(tau > 0.0)) tau = 1.0;
      }
      const CvChoice choice =
          cross_validate_lambda({cfg.kernel.spec, tau}, Xs, y, cfg.lambda, fold_seed);
      if (choice.risk < best_risk) {
        best_risk = choice.risk;
        best_j = j;
      }
    }
    if (best_j < 0) throw std::range_error("feature selection risk was never finite");
    rows.push_back({step, best_j + 1, best_risk});
    selected.push_back(best_j);
    remaining.erase(std::find(remaining.begin(), remaining.end(), best_j));
  }
  return rows;
}

std::vector<RkhsRow> rkhs_growth(const ExperimentConfig& cfg) {
  static const std::pair<const char*, KernelSpec> kFamilies[] = {
      {"laplace", KernelSpec::alpha_exponential(1.0)},
      {"gaussian", KernelSpec::gaussian()},
      {"exp_inner", KernelSpec::exp_inner_product()}};

  std::vector<RkhsRow> rows;
  rows.reserve(cfg.d_grid.size() * 3);
  for (std::size_t i = 0; i < cfg.d_grid.size(); ++i) {
    const int d = cfg.d_grid[i];
    const Eigen::MatrixXd X =
        sample_unit_cube(cfg.n, d, derive_seed(cfg.seed, kTagPointBase + i));
    const Eigen::VectorXd y = cfg.ground_truth(X);
    for (const auto& [name, spec] : kFamilies) {
      RkhsRow row;
      row.family = name;
      row.d = d;
      try {
        const ScaledKernel kernel{spec, static_cast<double>(d)};
        const double lambda =
            chosen_lambda(kernel, X, y, cfg.lambda, derive_seed(cfg.seed, kTagFolds));
        row.norm = rkhs_norm(fit_ridge(kernel, X, y, lambda));
        if (!std::isfinite(row.norm)) throw std::range_error("nonfinite norm");
      } catch (const std::exception& e) {
        row.norm = std::numeric_limits<double>::quiet_NaN();
        row.error = error_code(e);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<DiagnoseRow> diagnose(const ExperimentConfig& cfg) {
  const ResolvedInput in = resolve_input(cfg.input, cfg.input.beta, cfg.n);
  const Eigen::MatrixXd X = sample(in.spec, cfg.n, in.d, derive_seed(cfg.seed, kTagTrain));
  const double tau = resolve_tau(cfg.kernel, in.d_eff);

  std::vector<DiagnoseRow> rows;
  rows.push_back({"n", static_cast<double>(cfg.n)});
  rows.push_back({"d", static_cast<double>(in.d)});
  rows.push_back({"d_eff", in.d_eff});
  rows.push_back({"beta", in.spec.beta});
  rows.push_back({"tau", tau});

  const ConcentrationReport conc =
      concentration_check(X, in.spec.beta, cfg.epsilon, in.spec.covariance.trace());
  rows.push_back({"concentration_bound", conc.bound});
  rows.push_back({"max_offdiag_inner", conc.max_offdiag_inner});
  rows.push_back({"max_norm_dev", conc.max_norm_dev});
  rows.push_back({"concentration_satisfied", conc.satisfied ? 1.0 : 0.0});

  const ScaledKernel kernel{cfg.kernel.spec, tau};
  const Eigen::VectorXd eigs = eig_symmetric(gram(kernel, X));
  rows.push_back({"lambda_min", eigs(0)});

  const bool expandable = cfg.kernel.spec.family == KernelFamily::Gaussian ||
                          cfg.kernel.spec.family == KernelFamily::ExpInnerProduct;
  if (expandable) {
    const BarrierDomain domain = in.spec.projection == Projection::Sphere
                                     ? BarrierDomain::Sphere
                                     : BarrierDomain::Covariance;
    const int m = cfg.surrogate_m > 0 ? cfg.surrogate_m
                                      : barrier_degree(in.spec.beta, domain);
    const SurrogateGap gap = taylor_gram_report(cfg.kernel.spec, X, tau, m);
    const double bound = min_eig_bound(cfg.kernel.spec, m, gap.c);
    rows.push_back({"surrogate_m", static_cast<double>(m)});
    rows.push_back({"surrogate_c", gap.c});
    rows.push_back({"min_eig_bound", bound});
    rows.push_back({"min_eig_margin", eigs(0) - bound});
    rows.push_back({"opnorm_gap", gap.opnorm_gap});
  }
  return rows;
}

namespace {

// Runtime stays out of the file on purpose: every CSV row must be a pure
// function of (config, seed) so reruns reproduce the bytes exactly.
std::vector<std::string> bias_row_fields(const BiasRow& row, bool grid_first_norm) {
  // beta-sweep: beta,d,bias,bias_norm,... ; tau-sweep leads with bias_norm.
  std::vector<std::string> out;
  out.push_back(csv_num(row.grid_value));
  if (grid_first_norm) {
    out.push_back(csv_num(row.bias_norm));
    out.push_back(csv_num(row.bias));
  } else {
    out.push_back(csv_num(row.d));
    out.push_back(csv_num(row.bias));
    out.push_back(csv_num(row.bias_norm));
  }
  out.push_back(csv_num(row.b0));
  out.push_back(csv_num(row.se));
  out.push_back(row.error);
  return out;
}

Series ok_series(const std::vector<BiasRow>& rows, const std::string& label) {
  Series s;
  s.label = label;
  for (const auto& row : rows) {
    if (!row.error.empty()) continue;
    s.x.push_back(row.grid_value);
    s.y.push_back(row.bias_norm);
  }
  return s;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                          unsigned jobs) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string base = (fs::path(out_dir) / cfg.experiment).string();

  RunSummary summary;
  summary.csv_path = base + ".csv";

  auto chart = [&](const std::string& title, const std::string& xl, const std::string& yl,
                   const std::vector<Series>& series) {
    if (!cfg.svg) return;
    summary.svg_path = base + ".svg";
    write_line_chart(summary.svg_path, title, xl, yl, series);
  };

  if (cfg.experiment == "beta-sweep" || cfg.experiment == "tau-sweep") {
    const bool is_beta = cfg.experiment == "beta-sweep";
    CsvFile csv(summary.csv_path,
                is_beta ? std::vector<std::string>{"beta", "d", "bias", "bias_norm", "b0",
                                                   "stderr", "error"}
                        : std::vector<std::string>{"tau", "bias_norm", "bias", "b0",
                                                   "stderr", "error"});
    summary.points = is_beta ? cfg.beta_grid.size() : cfg.tau_grid.size();
    std::vector<BiasRow> rows;
    try {
      rows = is_beta ? beta_sweep(cfg, jobs) : tau_sweep(cfg, jobs);
    } catch (const std::exception& e) {
      summary.failures = summary.points;
      summary.message = e.what();
      csv.close();
      return summary;
    }
    for (const auto& row : rows) {
      if (!row.error.empty()) ++summary.failures;
      csv.row(bias_row_fields(row, !is_beta));
    }
    csv.close();
    chart(is_beta ? "Normalized bias across beta" : "Normalized bias across tau",
          is_beta ? "beta" : "tau", "bias / B(0)", {ok_series(rows, "normalized bias")});
    return summary;
  }

  if (cfg.experiment == "slice") {
    CsvFile csv(summary.csv_path, {"alpha", "fhat", "fstar"});
    summary.points = 1;
    std::vector<SliceRow> rows;
    try {
      rows = slice_trace(cfg);
    } catch (const std::exception& e) {
      summary.failures = 1;
      summary.message = e.what();
      csv.close();
      return summary;
    }
    Series fitted{"fitted", {}, {}};
    Series target{"target", {}, {}};
    for (const auto& row : rows) {
      csv.row({csv_num(row.alpha), csv_num(row.fhat), csv_num(row.fstar)});
      fitted.x.push_back(row.alpha);
      fitted.y.push_back(row.fhat);
      target.x.push_back(row.alpha);
      target.y.push_back(row.fstar);
    }
    csv.close();
    chart("Slice trace", "alpha", "value", {fitted, target});
    return summary;
  }

  if (cfg.experiment == "bias-variance") {
    CsvFile csv(summary.csv_path, {"d", "bias", "variance", "error"});
    summary.points = cfg.d_grid.size();
    std::vector<BiasVarianceRow> rows;
    try {
      rows = bias_variance(cfg, jobs);
    } catch (const std::exception& e) {
      summary.failures = summary.points;
      summary.message = e.what();
      csv.close();
      return summary;
    }
    Series bias{"bias", {}, {}};
    Series variance{"variance", {}, {}};
    for (const auto& row : rows) {
      if (!row.error.empty()) ++summary.failures;
      csv.row({csv_num(row.d), csv_num(row.bias), csv_num(row.variance), row.error});
      if (row.error.empty()) {
        bias.x.push_back(row.d);
        bias.y.push_back(row.bias);
        variance.x.push_back(row.d);
        variance.y.push_back(row.variance);
      }
    }
    csv.close();
    chart("Bias and variance across dimension", "d", "value", {bias, variance});
    return summary;
  }

  if (cfg.experiment == "featsel") {
    CsvFile csv(summary.csv_path, {"step", "feature", "cv_risk"});
    summary.points = 1;
    std::vector<FeatselRow> rows;
    try {
      rows = greedy_feature_selection(cfg);
    } catch (const std::exception& e) {
      summary.failures = 1;
      summary.message = e.what();
      csv.close();
      return summary;
    }
    Series risk{"cv risk", {}, {}};
    for (const auto& row : rows) {
      csv.row({csv_num(row.step), csv_num(row.feature), csv_num(row.cv_risk)});
      risk.x.push_back(row.step);
      risk.y.push_back(row.cv_risk);
    }
    csv.close();
    chart("Greedy feature selection", "step", "mean CV squared error", {risk});
    return summary;
  }

  if (cfg.experiment == "rkhs-growth") {
    CsvFile csv(summary.csv_path, {"family", "d", "norm", "error"});
    summary.points = cfg.d_grid.size() * 3;
    std::vector<RkhsRow> rows;
    try {
      rows = rkhs_growth(cfg);
    } catch (const std::exception& e) {
      summary.failures = summary.points;
      summary.message = e.what();
      csv.close();
      return summary;
    }
    std::vector<Series> series;
    for (const auto& row : rows) {
      if (!row.error.empty()) ++summary.failures;
      csv.row({row.family, csv_num(row.d), csv_num(row.norm), row.error});
      if (row.error.empty()) {
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const Series& s) { return s.label == row.family; });
        if (it == series.end()) {
          series.push_back({row.family, {}, {}});
          it = series.end() - 1;
        }
        it->x.push_back(row.d);
        it->y.push_back(row.norm);
      }
    }
    csv.close();
    chart("Interpolant norm across dimension", "d", "RKHS norm", series);
    return summary;
  }

  if (cfg.experiment == "diagnose") {
    CsvFile csv(summary.csv_path, {"metric", "value"});
    summary.points = 1;
    std::vector<DiagnoseRow> rows;
    try {
      rows = diagnose(cfg);
    } catch (const std::exception& e) {
      summary.failures = 1;
      summary.message = e.what();
      csv.close();
      return summary;
    }
    for (const auto& row : rows) csv.row({row.metric, csv_num(row.value)});
    csv.close();
    return summary;
  }

  throw std::logic_error("run_experiment: unknown experiment " + cfg.experiment);
}

}  // namespace kernellab::lab
