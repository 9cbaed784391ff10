#include "lab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

namespace kernellab::lab {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void check_keys(const json& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed, const std::string& path) {
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) fail(path, "unknown key \"" + item.key() + "\" in " + ctx);
  }
}

double as_double(const json& v, const std::string& name, const std::string& path) {
  if (!v.is_number()) fail(path, name + " must be a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& name, const std::string& path) {
  if (!v.is_number_integer()) fail(path, name + " must be an integer");
  return v.get<int>();
}

bool as_bool(const json& v, const std::string& name, const std::string& path) {
  if (!v.is_boolean()) fail(path, name + " must be a boolean");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& name, const std::string& path) {
  if (!v.is_string()) fail(path, name + " must be a string");
  return v.get<std::string>();
}

std::vector<double> as_double_grid(const json& v, const std::string& name,
                                   const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, name + " must be a nonempty array");
  std::vector<double> grid;
  grid.reserve(v.size());
  for (const auto& e : v) grid.push_back(as_double(e, name + " entry", path));
  return grid;
}

std::vector<int> as_int_grid(const json& v, const std::string& name,
                             const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, name + " must be a nonempty array");
  std::vector<int> grid;
  grid.reserve(v.size());
  for (const auto& e : v) grid.push_back(as_int(e, name + " entry", path));
  return grid;
}

KernelConfig parse_kernel(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "kernel must be an object");
  check_keys(j, "kernel", {"family", "alpha", "depth", "tau"}, path);
  if (!j.contains("family")) fail(path, "kernel.family is required");
  const std::string family = as_string(j.at("family"), "kernel.family", path);

  KernelConfig out;
  if (family == "gaussian") {
    out.spec = KernelSpec::gaussian();
  } else if (family == "alpha_exp") {
    const double alpha =
        j.contains("alpha") ? as_double(j.at("alpha"), "kernel.alpha", path) : 1.0;
    out.spec = KernelSpec::alpha_exponential(alpha);
  } else if (family == "exp_inner") {
    out.spec = KernelSpec::exp_inner_product();
  } else if (family == "ntk") {
    const int depth =
        j.contains("depth") ? as_int(j.at("depth"), "kernel.depth", path) : 1;
    out.spec = KernelSpec::ntk(depth);
  } else {
    fail(path, "kernel.family must be one of gaussian, alpha_exp, exp_inner, ntk");
  }
  if (j.contains("alpha") && family != "alpha_exp")
    fail(path, "kernel.alpha only applies to the alpha_exp family");
  if (j.contains("depth") && family != "ntk")
    fail(path, "kernel.depth only applies to the ntk family");
  if (j.contains("tau")) out.tau = as_double(j.at("tau"), "kernel.tau", path);

  try {
    out.spec.validate();
  } catch (const std::exception& e) {
    fail(path, std::string("kernel: ") + e.what());
  }
  return out;
}

CovarianceModel parse_covariance(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "distribution.cov must be an object");
  check_keys(j, "distribution.cov", {"kind", "d", "kappa", "diag"}, path);
  if (!j.contains("kind")) fail(path, "distribution.cov.kind is required");
  const std::string kind = as_string(j.at("kind"), "cov.kind", path);
  if (kind == "identity") {
    if (!j.contains("d")) fail(path, "identity covariance needs d");
    return CovarianceModel::identity(as_int(j.at("d"), "cov.d", path));
  }
  if (kind == "power_law") {
    if (!j.contains("d") || !j.contains("kappa"))
      fail(path, "power_law covariance needs d and kappa");
    return CovarianceModel::diagonal_power_law(as_int(j.at("d"), "cov.d", path),
                                               as_double(j.at("kappa"), "cov.kappa", path));
  }
  if (kind == "explicit") {
    if (!j.contains("diag")) fail(path, "explicit covariance needs diag");
    const auto entries = as_double_grid(j.at("diag"), "cov.diag", path);
    Eigen::VectorXd diag(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i)
      diag(static_cast<Eigen::Index>(i)) = entries[i];
    return CovarianceModel::explicit_diagonal(std::move(diag));
  }
  fail(path, "cov.kind must be one of identity, power_law, explicit");
}

InputConfig parse_distribution(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "distribution must be an object");
  InputConfig in;

  if (j.contains("preset")) {
    check_keys(j, "distribution", {"preset", "beta", "d"}, path);
    const std::string preset = as_string(j.at("preset"), "distribution.preset", path);
    if (preset == "P1") in.preset = InputConfig::Preset::P1;
    else if (preset == "P2") in.preset = InputConfig::Preset::P2;
    else if (preset == "P3") in.preset = InputConfig::Preset::P3;
    else if (preset == "unit_cube") in.preset = InputConfig::Preset::UnitCube;
    else fail(path, "distribution.preset must be one of P1, P2, P3, unit_cube");

    if (in.preset == InputConfig::Preset::UnitCube) {
      if (!j.contains("d")) fail(path, "unit_cube distribution needs d");
      in.d = as_int(j.at("d"), "distribution.d", path);
      if (in.d < 1) fail(path, "distribution.d must be at least 1");
      if (j.contains("beta")) fail(path, "unit_cube distribution has no beta");
    } else {
      if (j.contains("d")) fail(path, "preset distributions derive d; remove distribution.d");
      if (j.contains("beta"))
        in.beta = as_double(j.at("beta"), "distribution.beta", path);
      if (!(in.beta > 0.0) || in.beta > 2.0)
        fail(path, "distribution.beta must lie in (0, 2]");
    }
    return in;
  }

  check_keys(j, "distribution", {"cov", "entry_law", "projection", "beta"}, path);
  if (!j.contains("cov")) fail(path, "distribution needs either preset or cov");
  in.preset = InputConfig::Preset::Explicit;
  DistributionSpec spec;
  spec.covariance = parse_covariance(j.at("cov"), path);
  if (j.contains("entry_law")) {
    const std::string law = as_string(j.at("entry_law"), "entry_law", path);
    if (law == "standard_normal") spec.entry_law = EntryLaw::StandardNormal;
    else if (law == "uniform_unit_variance") spec.entry_law = EntryLaw::UniformUnitVariance;
    else fail(path, "entry_law must be standard_normal or uniform_unit_variance");
  }
  if (j.contains("projection")) {
    const std::string proj = as_string(j.at("projection"), "projection", path);
    if (proj == "none") spec.projection = Projection::None;
    else if (proj == "sphere") spec.projection = Projection::Sphere;
    else fail(path, "projection must be none or sphere");
  }
  if (j.contains("beta")) spec.beta = as_double(j.at("beta"), "distribution.beta", path);
  try {
    spec.validate();
  } catch (const std::exception& e) {
    fail(path, std::string("distribution: ") + e.what());
  }
  in.beta = spec.beta;
  in.explicit_spec = std::move(spec);
  return in;
}

GroundTruth parse_ground_truth(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "ground_truth must be an object");
  check_keys(j, "ground_truth", {"kind", "coeff", "coordinate", "power", "frequency"},
             path);
  if (!j.contains("kind")) fail(path, "ground_truth.kind is required");
  const std::string kind = as_string(j.at("kind"), "ground_truth.kind", path);
  if (kind == "monomial") {
    const double coeff =
        j.contains("coeff") ? as_double(j.at("coeff"), "coeff", path) : 1.0;
    const int coordinate =
        j.contains("coordinate") ? as_int(j.at("coordinate"), "coordinate", path) : 1;
    const int power = j.contains("power") ? as_int(j.at("power"), "power", path) : 1;
    if (coordinate < 1) fail(path, "ground_truth.coordinate must be at least 1");
    if (power < 0) fail(path, "ground_truth.power must be nonnegative");
    return GroundTruth::monomial(coeff, coordinate, power);
  }
  if (kind == "sine") {
    const double freq =
        j.contains("frequency") ? as_double(j.at("frequency"), "frequency", path) : 1.0;
    if (j.contains("coeff") || j.contains("coordinate") || j.contains("power"))
      fail(path, "sine ground truth takes only frequency");
    return GroundTruth::sine_first_coord(freq);
  }
  if (kind == "sparse_quad_lin") {
    if (j.size() != 1) fail(path, "sparse_quad_lin ground truth takes no parameters");
    return GroundTruth::sparse_quad_lin();
  }
  fail(path, "ground_truth.kind must be one of monomial, sine, sparse_quad_lin");
}

LambdaPolicy parse_lambda(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "lambda must be an object");
  check_keys(j, "lambda", {"policy", "value"}, path);
  if (!j.contains("policy")) fail(path, "lambda.policy is required");
  const std::string policy = as_string(j.at("policy"), "lambda.policy", path);
  LambdaPolicy out;
  if (policy == "zero") {
    out.kind = LambdaPolicy::Kind::Zero;
    if (j.contains("value")) fail(path, "lambda.value only applies to the fixed policy");
  } else if (policy == "fixed") {
    out.kind = LambdaPolicy::Kind::Fixed;
    if (!j.contains("value")) fail(path, "fixed lambda policy needs value");
    out.value = as_double(j.at("value"), "lambda.value", path);
    if (!(out.value >= 0.0)) fail(path, "lambda.value must be nonnegative");
  } else if (policy == "cv") {
    out.kind = LambdaPolicy::Kind::CrossValidated;
    if (j.contains("value")) fail(path, "lambda.value only applies to the fixed policy");
  } else {
    fail(path, "lambda.policy must be one of zero, fixed, cv");
  }
  return out;
}

NoiseConfig parse_noise(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "noise must be an object");
  check_keys(j, "noise", {"kind", "amplitude", "sigma"}, path);
  if (!j.contains("kind")) fail(path, "noise.kind is required");
  const std::string kind = as_string(j.at("kind"), "noise.kind", path);
  NoiseConfig out;
  if (kind == "none") {
    if (j.size() != 1) fail(path, "noise kind none takes no parameters");
  } else if (kind == "uniform") {
    out.kind = NoiseConfig::Kind::Uniform;
    if (!j.contains("amplitude")) fail(path, "uniform noise needs amplitude");
    out.amplitude = as_double(j.at("amplitude"), "noise.amplitude", path);
    if (!(out.amplitude >= 0.0)) fail(path, "noise.amplitude must be nonnegative");
    if (j.contains("sigma")) fail(path, "noise.sigma only applies to gaussian noise");
  } else if (kind == "gaussian") {
    out.kind = NoiseConfig::Kind::Gaussian;
    if (!j.contains("sigma")) fail(path, "gaussian noise needs sigma");
    out.sigma = as_double(j.at("sigma"), "noise.sigma", path);
    if (!(out.sigma >= 0.0)) fail(path, "noise.sigma must be nonnegative");
    if (j.contains("amplitude")) fail(path, "noise.amplitude only applies to uniform noise");
  } else {
    fail(path, "noise.kind must be one of none, uniform, gaussian");
  }
  return out;
}

// Keys every experiment accepts, extended below per experiment.
const std::initializer_list<const char*> kCommonKeys = {
    "experiment", "seed", "svg", "kernel", "lambda", "n", "n_test"};

std::vector<const char*> allowed_keys(const std::string& experiment) {
  std::vector<const char*> keys(kCommonKeys);
  auto add = [&keys](std::initializer_list<const char*> more) {
    keys.insert(keys.end(), more.begin(), more.end());
  };
  if (experiment == "beta-sweep") add({"distribution", "ground_truth", "beta_grid"});
  else if (experiment == "tau-sweep") add({"distribution", "ground_truth", "tau_grid"});
  else if (experiment == "slice") add({"d", "slice_points", "ground_truth"});
  else if (experiment == "bias-variance")
    add({"d_grid", "ground_truth", "noise", "repeats"});
  else if (experiment == "featsel")
    add({"distribution", "ground_truth", "noise", "budget"});
  else if (experiment == "rkhs-growth") add({"d_grid", "ground_truth"});
  else if (experiment == "diagnose") add({"distribution", "epsilon", "surrogate_m"});
  else throw std::logic_error("allowed_keys: unknown experiment " + experiment);
  return keys;
}

}  // namespace

ExperimentConfig load_config(const std::string& path, const std::string& experiment) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(path, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(path, "top level must be a JSON object");

  const auto keys = allowed_keys(experiment);
  for (const auto& item : j.items()) {
    const bool known = std::any_of(keys.begin(), keys.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known)
      fail(path, "unknown key \"" + item.key() + "\" for experiment " + experiment);
  }

  ExperimentConfig cfg;
  cfg.experiment = experiment;
  if (j.contains("experiment")) {
    const std::string declared = as_string(j.at("experiment"), "experiment", path);
    if (declared != experiment)
      fail(path, "config declares experiment \"" + declared + "\" but subcommand is \"" +
                     experiment + "\"");
  }

  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() &&
                                   s.get<long long>() < 0))
      fail(path, "seed must be a nonnegative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (j.contains("svg")) cfg.svg = as_bool(j.at("svg"), "svg", path);

  if (!j.contains("n")) fail(path, "n is required");
  cfg.n = as_int(j.at("n"), "n", path);
  if (cfg.n < 1) fail(path, "n must be at least 1");
  if (j.contains("n_test")) {
    cfg.n_test = as_int(j.at("n_test"), "n_test", path);
    if (cfg.n_test < 0) fail(path, "n_test must be nonnegative");
  }

  if (j.contains("kernel")) cfg.kernel = parse_kernel(j.at("kernel"), path);
  if (j.contains("lambda")) cfg.lambda = parse_lambda(j.at("lambda"), path);
  if (j.contains("noise")) cfg.noise = parse_noise(j.at("noise"), path);
  if (j.contains("distribution")) cfg.input = parse_distribution(j.at("distribution"), path);

  if (experiment == "beta-sweep") {
    if (!j.contains("distribution")) fail(path, "beta-sweep needs distribution");
    if (cfg.input.preset != InputConfig::Preset::P1 &&
        cfg.input.preset != InputConfig::Preset::P2 &&
        cfg.input.preset != InputConfig::Preset::P3)
      fail(path, "beta-sweep needs a P1, P2, or P3 preset distribution");
    if (!j.contains("ground_truth")) fail(path, "beta-sweep needs ground_truth");
    cfg.ground_truth = parse_ground_truth(j.at("ground_truth"), path);
    cfg.beta_grid = j.contains("beta_grid")
                        ? as_double_grid(j.at("beta_grid"), "beta_grid", path)
                        : std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5,
                                              0.6, 0.7, 0.8, 0.9, 1.0};
    for (double b : cfg.beta_grid)
      if (!(b > 0.0) || b > 2.0) fail(path, "beta_grid entries must lie in (0, 2]");
  } else if (experiment == "tau-sweep") {
    if (!j.contains("distribution")) fail(path, "tau-sweep needs distribution");
    if (!j.contains("ground_truth")) fail(path, "tau-sweep needs ground_truth");
    cfg.ground_truth = parse_ground_truth(j.at("ground_truth"), path);
    if (!j.contains("tau_grid")) fail(path, "tau-sweep needs tau_grid");
    cfg.tau_grid = as_double_grid(j.at("tau_grid"), "tau_grid", path);
    for (double t : cfg.tau_grid)
      if (!(t > 0.0)) fail(path, "tau_grid entries must be positive");
  } else if (experiment == "slice") {
    if (!j.contains("d")) fail(path, "slice needs d");
    cfg.d = as_int(j.at("d"), "d", path);
    if (cfg.d < 1) fail(path, "d must be at least 1");
    if (j.contains("slice_points")) {
      cfg.slice_points = as_int(j.at("slice_points"), "slice_points", path);
      if (cfg.slice_points < 2) fail(path, "slice_points must be at least 2");
    }
    cfg.ground_truth = j.contains("ground_truth")
                           ? parse_ground_truth(j.at("ground_truth"), path)
                           : GroundTruth::sine_first_coord();
  } else if (experiment == "bias-variance") {
    cfg.d_grid = j.contains("d_grid") ? as_int_grid(j.at("d_grid"), "d_grid", path)
                                      : std::vector<int>{9, 29, 59, 109, 209};
    for (int d : cfg.d_grid)
      if (d < 1) fail(path, "d_grid entries must be at least 1");
    cfg.ground_truth = j.contains("ground_truth")
                           ? parse_ground_truth(j.at("ground_truth"), path)
                           : GroundTruth::sparse_quad_lin();
    if (j.contains("repeats")) {
      cfg.repeats = as_int(j.at("repeats"), "repeats", path);
      if (cfg.repeats < 20) fail(path, "bias-variance needs repeats >= 20");
    }
  } else if (experiment == "featsel") {
    if (!j.contains("distribution")) fail(path, "featsel needs distribution");
    if (cfg.input.preset == InputConfig::Preset::UnitCube && cfg.input.d < 1)
      fail(path, "featsel unit_cube distribution needs d");
    if (!j.contains("ground_truth")) fail(path, "featsel needs ground_truth");
    cfg.ground_truth = parse_ground_truth(j.at("ground_truth"), path);
    if (j.contains("budget")) {
      cfg.budget = as_int(j.at("budget"), "budget", path);
      if (cfg.budget < 1) fail(path, "budget must be at least 1");
    }
  } else if (experiment == "rkhs-growth") {
    cfg.d_grid = j.contains("d_grid") ? as_int_grid(j.at("d_grid"), "d_grid", path)
                                      : std::vector<int>{5, 20, 80};
    for (int d : cfg.d_grid)
      if (d < 1) fail(path, "d_grid entries must be at least 1");
    cfg.ground_truth = j.contains("ground_truth")
                           ? parse_ground_truth(j.at("ground_truth"), path)
                           : GroundTruth::monomial(1.0, 1, 1);
  } else if (experiment == "diagnose") {
    if (!j.contains("distribution")) fail(path, "diagnose needs distribution");
    if (cfg.input.preset == InputConfig::Preset::UnitCube)
      fail(path, "diagnose needs a covariance-based distribution, not unit_cube");
    if (j.contains("epsilon")) {
      cfg.epsilon = as_double(j.at("epsilon"), "epsilon", path);
      if (!(cfg.epsilon > 0.0)) fail(path, "epsilon must be positive");
    }
    if (j.contains("surrogate_m")) {
      cfg.surrogate_m = as_int(j.at("surrogate_m"), "surrogate_m", path);
      if (cfg.surrogate_m < 0) fail(path, "surrogate_m must be nonnegative");
    }
  }

  return cfg;
}

}  // namespace kernellab::lab
