#pragma once

#include <string>

#include "mftg/meanfield.hpp"

namespace mftg {

// Solution files are self-contained JSON: type set, prices, trajectory,
// fitted weights and solver diagnostics. `solver_hash` lets consumers refuse
// solutions produced under a different solver-relevant configuration.
std::string solution_to_json(const MFTESolution& sol, const std::vector<TeamType>& types,
                             const std::string& solver_hash, const std::string& config_hash,
                             std::uint64_t seed);

struct LoadedSolution {
  MFTESolution solution;
  std::vector<TeamType> types;
  std::string solver_hash;
  std::string config_hash;
  std::uint64_t seed = 0;
};

LoadedSolution solution_from_json(const std::string& json_text);
LoadedSolution load_solution(const std::string& path);

std::string weights_to_json(const ValueWeights& vw);
ValueWeights weights_from_json(const std::string& json_text);

}  // namespace mftg
