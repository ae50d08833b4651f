#include "mftg/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mftg {

using nlohmann::json;

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

namespace {

[[noreturn]] void missing(const std::string& field) {
  throw ConfigError("config: missing field \"" + field + "\"");
}

const json& require(const json& j, const std::string& field) {
  auto it = j.find(field);
  if (it == j.end()) missing(field);
  return *it;
}

double require_number(const json& j, const std::string& field) {
  const json& v = require(j, field);
  if (!v.is_number()) throw ConfigError("config: field \"" + field + "\" must be a number");
  return v.get<double>();
}

Eigen::MatrixXd parse_matrix(const json& v, const std::string& field) {
  if (v.is_number()) return Eigen::MatrixXd::Constant(1, 1, v.get<double>());
  if (!v.is_array() || v.empty())
    throw ConfigError("config: field \"" + field + "\" must be a number or matrix");
  if (v[0].is_number()) {
    // Flat array: interpreted as a diagonal matrix.
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) M(i, i) = v[i].get<double>();
    return M;
  }
  const std::size_t rows = v.size(), cols = v[0].size();
  Eigen::MatrixXd M(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!v[r].is_array() || v[r].size() != cols)
      throw ConfigError("config: ragged matrix in field \"" + field + "\"");
    for (std::size_t c = 0; c < cols; ++c) M(r, c) = v[r][c].get<double>();
  }
  return M;
}

Eigen::VectorXd parse_vector(const json& v, const std::string& field) {
  if (v.is_number()) return Eigen::VectorXd::Constant(1, v.get<double>());
  if (!v.is_array()) throw ConfigError("config: field \"" + field + "\" must be a number or array");
  Eigen::VectorXd x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) x(i) = v[i].get<double>();
  return x;
}

TeamType parse_type(const json& j, std::size_t index) {
  const std::string at = "types[" + std::to_string(index) + "].";
  TeamType t;
  t.id = j.value("id", "type" + std::to_string(index));
  t.prob = j.contains("prob") ? require_number(j, "prob") : 1.0;
  t.A = parse_matrix(require(j, "A"), at + "A");
  t.B = parse_matrix(require(j, "B"), at + "B");
  t.Q = parse_matrix(require(j, "Q"), at + "Q");
  t.R = parse_matrix(require(j, "R"), at + "R");
  t.K_W = parse_matrix(require(j, "K_W"), at + "K_W");
  t.Sigma0 = parse_matrix(require(j, "Sigma0"), at + "Sigma0");
  t.nu = j.contains("nu") ? parse_vector(j["nu"], at + "nu")
                          : Eigen::VectorXd::Zero(t.A.rows());
  return t;
}

json canonical_type(const TeamType& t) {
  json j;
  j["id"] = t.id;
  j["prob"] = t.prob;
  auto mat = [](const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  j["A"] = mat(t.A);
  j["B"] = mat(t.B);
  j["Q"] = mat(t.Q);
  j["R"] = mat(t.R);
  j["K_W"] = mat(t.K_W);
  j["Sigma0"] = mat(t.Sigma0);
  json nu = json::array();
  for (Eigen::Index i = 0; i < t.nu.size(); ++i) nu.push_back(t.nu(i));
  j["nu"] = nu;
  return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  const json& types = require(j, "types");
  if (!types.is_array() || types.empty()) throw ConfigError("config: field \"types\" must be a nonempty array");
  for (std::size_t i = 0; i < types.size(); ++i) cfg.types.push_back(parse_type(types[i], i));
  if (cfg.types.size() == 1) cfg.types[0].prob = 1.0;
  validate_type_set(cfg.types);

  const double T = require_number(j, "T");
  if (T < 1 || T != std::floor(T)) throw ConfigError("config: field \"T\" must be a positive integer");
  cfg.horizon = static_cast<int>(T);
  cfg.lambda = require_number(j, "lambda");
  if (cfg.lambda < 0) throw ConfigError("config: field \"lambda\" must be nonnegative");
  cfg.alpha = require_number(j, "alpha");
  if (!(cfg.alpha > 0)) throw ConfigError("config: field \"alpha\" must be positive");

  if (j.contains("solver")) {
    const json& s = j["solver"];
    cfg.solver.max_iter = s.value("max_iter", cfg.solver.max_iter);
    cfg.solver.damping = s.value("damping", cfg.solver.damping);
    cfg.solver.tol = s.value("tol", cfg.solver.tol);
    cfg.solver.rollouts = s.value("rollouts", cfg.solver.rollouts);
    cfg.solver.shifted_alignment = s.value("shifted_alignment", false);
    if (s.contains("fit")) {
      const json& f = s["fit"];
      cfg.solver.fit.samples = f.value("samples", cfg.solver.fit.samples);
      cfg.solver.fit.ridge = f.value("ridge", cfg.solver.fit.ridge);
      cfg.solver.fit.degree = f.value("degree", cfg.solver.fit.degree);
      cfg.solver.fit.explore_fraction = f.value("explore_fraction", cfg.solver.fit.explore_fraction);
      cfg.solver.fit.soft_bellman = f.value("soft_bellman", false);
    }
    if (!(cfg.solver.damping > 0.0 && cfg.solver.damping <= 1.0))
      throw ConfigError("config: field \"solver.damping\" must lie in (0, 1]");
    if (cfg.solver.max_iter < 1) throw ConfigError("config: field \"solver.max_iter\" must be positive");
    if (!(cfg.solver.tol > 0)) throw ConfigError("config: field \"solver.tol\" must be positive");
    if (cfg.solver.rollouts < 1) throw ConfigError("config: field \"solver.rollouts\" must be positive");
    ValueWeights::feature_count(cfg.solver.fit.degree);  // rejects bad degrees
  }

  if (j.contains("sim")) {
    const json& s = j["sim"];
    cfg.sim.N = s.value("N", cfg.sim.N);
    cfg.sim.runs = s.value("runs", cfg.sim.runs);
    cfg.sim.seed = s.value("seed", cfg.sim.seed);
    const std::string pop = s.value("population", "proportional");
    if (pop == "proportional") cfg.sim.population = PopulationMode::kProportional;
    else if (pop == "iid") cfg.sim.population = PopulationMode::kIid;
    else throw ConfigError("config: field \"sim.population\" must be \"proportional\" or \"iid\"");
    const std::string init = s.value("init_dist", "gaussian");
    if (init == "gaussian") cfg.sim.init_dist = InitDist::kGaussian;
    else if (init == "uniform") cfg.sim.init_dist = InitDist::kUniformSymmetric;
    else throw ConfigError("config: field \"sim.init_dist\" must be \"gaussian\" or \"uniform\"");
    if (cfg.sim.N < 1) throw ConfigError("config: field \"sim.N\" must be positive");
    if (cfg.sim.runs < 1) throw ConfigError("config: field \"sim.runs\" must be positive");
  }

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    SweepSpec sweep;
    const std::string var = require(s, "variable").get<std::string>();
    const json& points = require(s, "points");
    if (!points.is_array() || points.empty())
      throw ConfigError("config: field \"sweep.points\" must be a nonempty array");
    if (var == "lambda_alpha") {
      sweep.variable = SweepSpec::Variable::kLambdaAlpha;
      for (const auto& p : points) {
        if (!p.is_array() || p.size() != 2)
          throw ConfigError("config: lambda_alpha sweep points must be [lambda, alpha] pairs");
        sweep.lambda_alpha.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
    } else if (var == "N" || var == "degree") {
      sweep.variable = var == "N" ? SweepSpec::Variable::kN : SweepSpec::Variable::kDegree;
      for (const auto& p : points) sweep.values.push_back(p.get<int>());
    } else {
      throw ConfigError("config: field \"sweep.variable\" must be \"lambda_alpha\", \"N\" or \"degree\"");
    }
    cfg.sweep = sweep;
  }

  if (j.contains("deviation")) {
    const json& d = j["deviation"];
    DeviationSpec dev;
    dev.team = d.value("team", 0);
    dev.include_equilibrium = d.value("include_equilibrium", true);
    if (d.contains("thresholds")) {
      if (d["thresholds"].is_string() && d["thresholds"].get<std::string>() == "default")
        cfg.deviation_thresholds_default = true;
      else
        for (const auto& v : d["thresholds"]) dev.thresholds.push_back(v.get<double>());
    }
    if (d.contains("alt_alphas"))
      for (const auto& v : d["alt_alphas"]) dev.alt_alphas.push_back(v.get<double>());
    dev.always_transmit = d.value("always_transmit", false);
    dev.never_transmit = d.value("never_transmit", false);
    cfg.deviation = dev;
  }

  // Canonical re-serialization for hashing; key order is fixed by the json
  // object representation.
  json canon;
  json type_arr = json::array();
  for (const auto& t : cfg.types) type_arr.push_back(canonical_type(t));
  canon["types"] = type_arr;
  canon["T"] = cfg.horizon;
  canon["lambda"] = cfg.lambda;
  canon["alpha"] = cfg.alpha;
  canon["solver"] = {{"max_iter", cfg.solver.max_iter},
                     {"damping", cfg.solver.damping},
                     {"tol", cfg.solver.tol},
                     {"rollouts", cfg.solver.rollouts},
                     {"shifted_alignment", cfg.solver.shifted_alignment},
                     {"fit",
                      {{"samples", cfg.solver.fit.samples},
                       {"ridge", cfg.solver.fit.ridge},
                       {"degree", cfg.solver.fit.degree},
                       {"explore_fraction", cfg.solver.fit.explore_fraction},
                       {"soft_bellman", cfg.solver.fit.soft_bellman}}}};
  cfg.solver_hash = hash_hex(fnv1a(canon.dump()));
  canon["sim"] = {{"N", cfg.sim.N},
                  {"runs", cfg.sim.runs},
                  {"seed", cfg.sim.seed},
                  {"population", cfg.sim.population == PopulationMode::kIid ? "iid" : "proportional"},
                  {"init_dist", cfg.sim.init_dist == InitDist::kGaussian ? "gaussian" : "uniform"}};
  if (j.contains("sweep")) canon["sweep"] = j["sweep"];
  if (j.contains("deviation")) canon["deviation"] = j["deviation"];
  cfg.config_hash = hash_hex(fnv1a(canon.dump()));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace mftg
