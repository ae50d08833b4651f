#include "mftg/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mftg {

using nlohmann::json;

namespace {

json weights_to_json_obj(const ValueWeights& vw) {
  json entries = json::array();
  for (int k = 0; k <= vw.horizon(); ++k) {
    json e;
    e["k"] = k;
    e["w0"] = vw.w[k][0];
    e["w1"] = vw.w[k][1];
    e["w2"] = vw.w[k][2];
    e["w3"] = vw.w[k][3];
    if (vw.degree >= 3) e["w4"] = vw.w[k][4];
    if (vw.degree >= 4) e["w5"] = vw.w[k][5];
    entries.push_back(e);
  }
  return json{{"degree", vw.degree}, {"entries", entries}};
}

ValueWeights weights_from_json_obj(const json& j) {
  ValueWeights vw;
  vw.degree = j.at("degree").get<int>();
  const int n_feat = ValueWeights::feature_count(vw.degree);
  const json& entries = j.at("entries");
  vw.w.assign(entries.size(), std::vector<double>(n_feat, 0.0));
  for (const auto& e : entries) {
    const int k = e.at("k").get<int>();
    if (k < 0 || k >= static_cast<int>(vw.w.size()))
      throw ConfigError("solution: weight entry index out of range");
    vw.w[k][0] = e.at("w0").get<double>();
    vw.w[k][1] = e.at("w1").get<double>();
    vw.w[k][2] = e.at("w2").get<double>();
    vw.w[k][3] = e.at("w3").get<double>();
    if (vw.degree >= 3) vw.w[k][4] = e.at("w4").get<double>();
    if (vw.degree >= 4) vw.w[k][5] = e.at("w5").get<double>();
  }
  return vw;
}

json type_to_json(const TeamType& t) {
  auto mat = [](const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  json nu = json::array();
  for (Eigen::Index i = 0; i < t.nu.size(); ++i) nu.push_back(t.nu(i));
  return json{{"id", t.id},     {"prob", t.prob},      {"A", mat(t.A)},
              {"B", mat(t.B)},  {"Q", mat(t.Q)},       {"R", mat(t.R)},
              {"K_W", mat(t.K_W)}, {"Sigma0", mat(t.Sigma0)}, {"nu", nu}};
}

TeamType type_from_json(const json& j) {
  auto mat = [](const json& v) {
    Eigen::MatrixXd M(v.size(), v[0].size());
    for (std::size_t r = 0; r < v.size(); ++r)
      for (std::size_t c = 0; c < v[r].size(); ++c) M(r, c) = v[r][c].get<double>();
    return M;
  };
  TeamType t;
  t.id = j.at("id").get<std::string>();
  t.prob = j.at("prob").get<double>();
  t.A = mat(j.at("A"));
  t.B = mat(j.at("B"));
  t.Q = mat(j.at("Q"));
  t.R = mat(j.at("R"));
  t.K_W = mat(j.at("K_W"));
  t.Sigma0 = mat(j.at("Sigma0"));
  const json& nu = j.at("nu");
  t.nu.resize(nu.size());
  for (std::size_t i = 0; i < nu.size(); ++i) t.nu(i) = nu[i].get<double>();
  return t;
}

}  // namespace

std::string solution_to_json(const MFTESolution& sol, const std::vector<TeamType>& types,
                             const std::string& solver_hash, const std::string& config_hash,
                             std::uint64_t seed) {
  json j;
  j["schema"] = "mfte-v1";
  j["horizon"] = sol.horizon;
  j["lambda"] = sol.lambda;
  j["alpha"] = sol.alpha;
  j["solver_hash"] = solver_hash;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["g_star"] = sol.g_star;
  json type_arr = json::array();
  json weight_arr = json::array();
  for (std::size_t t = 0; t < types.size(); ++t) {
    type_arr.push_back(type_to_json(types[t]));
    json w = weights_to_json_obj(sol.weights[t]);
    w["type_id"] = types[t].id;
    weight_arr.push_back(w);
  }
  j["types"] = type_arr;
  j["weights"] = weight_arr;
  j["residual"] = sol.residual;
  j["iterations"] = sol.iterations;
  j["converged"] = sol.converged;
  j["contraction_certified"] = sol.contraction_certified;
  j["lipschitz_estimate"] = sol.lipschitz_estimate;
  j["mc_std"] = sol.mc_std;
  return j.dump(2) + "\n";
}

LoadedSolution solution_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("solution: invalid JSON: ") + e.what());
  }
  if (j.value("schema", "") != "mfte-v1") throw ConfigError("solution: unknown schema");

  LoadedSolution out;
  out.solver_hash = j.value("solver_hash", "");
  out.config_hash = j.value("config_hash", "");
  out.seed = j.value("seed", std::uint64_t{0});
  MFTESolution& sol = out.solution;
  sol.horizon = j.at("horizon").get<int>();
  sol.lambda = j.at("lambda").get<double>();
  sol.alpha = j.at("alpha").get<double>();
  sol.g_star = j.at("g_star").get<std::vector<double>>();
  sol.residual = j.at("residual").get<double>();
  sol.iterations = j.at("iterations").get<int>();
  sol.converged = j.at("converged").get<bool>();
  sol.contraction_certified = j.at("contraction_certified").get<bool>();
  sol.lipschitz_estimate = j.value("lipschitz_estimate", 0.0);
  sol.mc_std = j.value("mc_std", 0.0);

  for (const auto& tj : j.at("types")) out.types.push_back(type_from_json(tj));
  validate_type_set(out.types);
  for (const auto& wj : j.at("weights")) sol.weights.push_back(weights_from_json_obj(wj));
  if (sol.weights.size() != out.types.size())
    throw ConfigError("solution: one weight set per type required");
  for (const auto& w : sol.weights)
    if (w.horizon() != sol.horizon) throw ConfigError("solution: weights horizon mismatch");
  if (static_cast<int>(sol.g_star.size()) != sol.horizon)
    throw ConfigError("solution: trajectory length mismatch");
  check_trajectory(sol.g_star);

  sol.scheds.reserve(out.types.size());
  for (const auto& t : out.types) sol.scheds.push_back(solve_riccati(t, sol.horizon));
  return out;
}

LoadedSolution load_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("solution: cannot open \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return solution_from_json(ss.str());
}

std::string weights_to_json(const ValueWeights& vw) { return weights_to_json_obj(vw).dump(2) + "\n"; }

ValueWeights weights_from_json(const std::string& json_text) {
  return weights_from_json_obj(json::parse(json_text));
}

}  // namespace mftg
