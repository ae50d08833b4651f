#pragma once

#include <Eigen/Dense>

#include "mftg/types.hpp"

namespace mftg {

// Controller-side state estimate update. The downlink delivers X_k one step
// late, so the update folds the transmission decision gamma in {0,1} made at
// step k into the estimate for step k+1:
//   Z_{k+1} = A ((1-gamma) Z_k + gamma X_k) + B U_k.
// No-transmission events carry no information here by construction.
inline Eigen::VectorXd estimator_step(const Eigen::VectorXd& Z, int gamma,
                                      const Eigen::VectorXd& X, const Eigen::VectorXd& U,
                                      const TeamType& type) {
  return type.A * ((1 - gamma) * Z + gamma * X) + type.B * U;
}

// Estimation error e = X - Z evolves autonomously:
//   e_{k+1} = (1-gamma) A e_k + W_k.
inline Eigen::VectorXd error_step(const Eigen::VectorXd& e, int gamma, const Eigen::VectorXd& W,
                                  const TeamType& type) {
  if (gamma) return W;
  return type.A * e + W;
}

// Scalar fast path used by the rollout-heavy code.
inline double error_step_scalar(double e, int gamma, double w, double a) {
  return gamma ? w : a * e + w;
}

}  // namespace mftg
