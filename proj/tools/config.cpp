#include "config.hpp"

#include <fstream>

#include "gpfail/errors.hpp"

namespace gpfail::cli {

namespace {

using nlohmann::json;

const json& require(const json& j, const std::string& key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError("config: missing field '" + key + "'");
  }
  return *it;
}

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return require(j, key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config: field '" + key + "': " + e.what());
  }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback) {
  const auto it = j.find(key);
  if (it == j.end()) {
    return fallback;
  }
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config: field '" + key + "': " + e.what());
  }
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

Box parse_box(const json& j) {
  Box box;
  box.lo = to_vector(get_as<std::vector<double>>(j, "lo"));
  box.hi = to_vector(get_as<std::vector<double>>(j, "hi"));
  return box;
}

CovarianceSpec parse_covariance(const json& j) {
  CovarianceSpec cov;
  cov.variance = get_as<double>(j, "variance");
  cov.smoothness = get_as<double>(j, "smoothness");
  cov.ranges = get_as<std::vector<double>>(j, "ranges");
  return cov;
}

InputLaw parse_input_law(const json& j, const Box& domain) {
  const std::string kind = get_as<std::string>(j, "kind");
  if (kind == "uniform") {
    return InputLaw::uniform(domain);
  }
  if (kind == "normal") {
    return InputLaw::normal(to_vector(get_as<std::vector<double>>(j, "mean")),
                            to_vector(get_as<std::vector<double>>(j, "sd")));
  }
  throw ConfigError("config: field 'input_law.kind': expected \"uniform\" or \"normal\", got \"" +
                    kind + "\"");
}

std::function<double(const Eigen::VectorXd&)> parse_objective(
    const std::string& name, int* expected_dim) {
  if (name == "one_d") {
    *expected_dim = 1;
    return [](const Eigen::VectorXd& x) { return f_one_d(x); };
  }
  if (name == "four_branch") {
    *expected_dim = 2;
    return [](const Eigen::VectorXd& x) { return f_four_branch(x); };
  }
  if (name == "four_branch_neg") {
    *expected_dim = 2;
    return [](const Eigen::VectorXd& x) { return -f_four_branch(x); };
  }
  throw ConfigError("config: field 'objective': unknown objective \"" + name +
                    "\" (known: one_d, four_branch, four_branch_neg)");
}

std::vector<LabeledCriterion> parse_criteria_list(const json& j) {
  std::vector<LabeledCriterion> out;
  if (!j.is_array()) {
    throw ConfigError("config: field 'criteria': expected an array");
  }
  for (const auto& item : j) {
    LabeledCriterion lc;
    lc.criterion = parse_criterion(item);
    lc.label = get_or<std::string>(item, "label", lc.criterion.describe());
    out.push_back(std::move(lc));
  }
  if (out.empty()) {
    throw ConfigError("config: field 'criteria': array is empty");
  }
  return out;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open file: " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
}

CriterionConfig parse_criterion(const json& j) {
  CriterionConfig c;
  const std::string kind = get_as<std::string>(j, "kind");
  if (kind == "sur") {
    c.kind = CriterionConfig::Kind::Sur;
  } else if (kind == "timse") {
    c.kind = CriterionConfig::Kind::Timse;
  } else if (kind == "rb") {
    c.kind = CriterionConfig::Kind::Rb;
  } else if (kind == "ech") {
    c.kind = CriterionConfig::Kind::Ech;
  } else if (kind == "maximin") {
    c.kind = CriterionConfig::Kind::Maximin;
  } else {
    throw ConfigError("config: field 'criterion.kind': unknown kind \"" + kind +
                      "\" (known: sur, timse, rb, ech, maximin)");
  }
  c.variant = get_or<int>(j, "variant", c.variant);
  c.q_nodes = get_or<int>(j, "q_nodes", c.q_nodes);
  c.m0 = get_or<int>(j, "m0", c.m0);
  c.sigma_eps_sq = get_or<double>(j, "sigma_eps_sq", c.sigma_eps_sq);
  c.kappa = get_or<double>(j, "kappa", c.kappa);
  c.delta = get_or<int>(j, "delta", c.delta);
  c.prune_candidates_only =
      get_or<bool>(j, "prune_candidates_only", c.prune_candidates_only);
  return c;
}

CriterionConfig parse_criterion_name(const std::string& name) {
  CriterionConfig c;
  if (name == "sur1" || name == "sur2" || name == "sur3" || name == "sur4") {
    c.kind = CriterionConfig::Kind::Sur;
    c.variant = name[3] - '0';
    return c;
  }
  if (name == "timse") {
    c.kind = CriterionConfig::Kind::Timse;
    return c;
  }
  if (name == "ech") {
    c.kind = CriterionConfig::Kind::Ech;
    c.m0 = 0;
    return c;
  }
  if (name == "rb") {
    c.kind = CriterionConfig::Kind::Rb;
    c.m0 = 0;
    return c;
  }
  if (name == "maximin") {
    c.kind = CriterionConfig::Kind::Maximin;
    return c;
  }
  throw ConfigError("unknown criterion name \"" + name +
                    "\" (known: sur1..sur4, timse, ech, rb, maximin)");
}

ExperimentConfig parse_experiment_config(const json& j) {
  ExperimentConfig cfg;
  int expected_dim = 0;
  cfg.objective =
      parse_objective(get_as<std::string>(j, "objective"), &expected_dim);
  cfg.domain = parse_box(require(j, "domain"));
  if (cfg.domain.dim() != expected_dim) {
    throw ConfigError("config: field 'domain': dimension " +
                      std::to_string(cfg.domain.dim()) +
                      " does not match the objective (expects " +
                      std::to_string(expected_dim) + ")");
  }
  cfg.input_law = parse_input_law(require(j, "input_law"), cfg.domain);
  cfg.threshold = get_as<double>(j, "threshold");
  cfg.n0 = get_as<int>(j, "n0");
  cfg.budget = get_as<int>(j, "budget");
  cfg.m = get_as<int>(j, "m");
  cfg.criterion = parse_criterion(require(j, "criterion"));
  cfg.reestimate_every = get_or<int>(j, "reestimate_every", 0);
  if (const auto it = j.find("estimate"); it != j.end()) {
    const std::string mode = get_or<std::string>(*it, "mode", "reml");
    if (mode == "reml") {
      cfg.estimate_mode = EstimateMode::REML;
    } else if (mode == "ml") {
      cfg.estimate_mode = EstimateMode::ML;
    } else {
      throw ConfigError("config: field 'estimate.mode': expected \"reml\" or \"ml\"");
    }
    cfg.estimate_smoothness = get_or<bool>(*it, "smoothness", false);
    cfg.estimate_starts = get_or<int>(*it, "starts", cfg.estimate_starts);
  }
  const std::string trend = get_or<std::string>(j, "trend", "constant");
  if (trend == "constant") {
    cfg.trend = TrendSpec::constant();
  } else if (trend == "linear") {
    cfg.trend = TrendSpec::linear(expected_dim);
  } else {
    throw ConfigError("config: field 'trend': expected \"constant\" or \"linear\"");
  }
  cfg.cov_init = parse_covariance(require(j, "covariance"));
  if (const auto it = j.find("seeds"); it != j.end()) {
    cfg.seed_design = get_or<std::uint64_t>(*it, "design", cfg.seed_design);
    cfg.seed_sample = get_or<std::uint64_t>(*it, "sample", cfg.seed_sample);
    cfg.seed_estimation =
        get_or<std::uint64_t>(*it, "estimation", cfg.seed_estimation);
  }
  cfg.lhs_trials = get_or<int>(j, "lhs_trials", cfg.lhs_trials);
  cfg.nugget_rel = get_or<double>(j, "nugget_rel", cfg.nugget_rel);
  return cfg;
}

StudyKind parse_study_kind(const json& j) {
  const std::string s = get_as<std::string>(j, "study");
  if (s == "four_branch") {
    return StudyKind::FourBranch;
  }
  if (s == "gp_paths") {
    return StudyKind::GpPaths;
  }
  throw ConfigError("config: field 'study': expected \"four_branch\" or \"gp_paths\", got \"" +
                    s + "\"");
}

FourBranchStudySpec parse_four_branch_spec(const json& j, bool paper_scale) {
  FourBranchStudySpec spec;
  spec.replications = get_or<int>(j, "replications", spec.replications);
  spec.m = get_or<int>(j, "m", spec.m);
  spec.n0 = get_or<int>(j, "n0", spec.n0);
  spec.added_budget = get_or<int>(j, "added_budget", spec.added_budget);
  spec.reestimate_every =
      get_or<int>(j, "reestimate_every", spec.reestimate_every);
  spec.base_seed = get_or<std::uint64_t>(j, "base_seed", spec.base_seed);
  spec.lhs_trials = get_or<int>(j, "lhs_trials", spec.lhs_trials);
  spec.estimate_starts = get_or<int>(j, "estimate_starts", spec.estimate_starts);
  if (const auto it = j.find("gammas"); it != j.end()) {
    spec.gammas = get_as<std::vector<double>>(j, "gammas");
  }
  spec.criteria = (j.find("criteria") != j.end())
                      ? parse_criteria_list(j.at("criteria"))
                      : four_branch_default_criteria();
  if (paper_scale) {
    spec.replications = 100;
    spec.m = 30000;
    spec.added_budget = 200;
  }
  return spec;
}

GpPathStudySpec parse_gp_path_spec(const json& j, bool paper_scale) {
  GpPathStudySpec spec = GpPathStudySpec::defaults(get_or<int>(j, "d", 1));
  spec.paths = get_or<int>(j, "paths", spec.paths);
  spec.m = get_or<int>(j, "m", spec.m);
  spec.n0 = get_or<int>(j, "n0", spec.n0);
  spec.total_budget = get_or<int>(j, "total_budget", spec.total_budget);
  spec.include_reference =
      get_or<bool>(j, "include_reference", spec.include_reference);
  spec.base_seed = get_or<std::uint64_t>(j, "base_seed", spec.base_seed);
  spec.lhs_trials = get_or<int>(j, "lhs_trials", spec.lhs_trials);
  if (const auto it = j.find("covariance"); it != j.end()) {
    spec.cov = parse_covariance(*it);
  }
  if (j.find("criteria") != j.end()) {
    spec.criteria = parse_criteria_list(j.at("criteria"));
  }
  if (paper_scale) {
    spec.paths = 4000;
  }
  return spec;
}

}  // namespace gpfail::cli
