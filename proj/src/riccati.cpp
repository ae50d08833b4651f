#include "mftg/riccati.hpp"

namespace mftg {

RiccatiSchedule solve_riccati(const TeamType& type, int horizon) {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  const int n = type.state_dim();
  const int m = type.input_dim();
  const Eigen::MatrixXd& A = type.A;
  const Eigen::MatrixXd& B = type.B;

  RiccatiSchedule sched;
  sched.horizon = horizon;
  sched.P.assign(horizon + 1, Eigen::MatrixXd::Zero(n, n));
  sched.L.assign(horizon, Eigen::MatrixXd::Zero(m, n));
  sched.Gamma.assign(horizon, Eigen::MatrixXd::Zero(n, n));
  sched.Rhat.assign(horizon, Eigen::MatrixXd::Zero(m, m));

  for (int k = horizon - 1; k >= 0; --k) {
    const Eigen::MatrixXd& Pk1 = sched.P[k + 1];
    const Eigen::MatrixXd Rhat = type.R + B.transpose() * Pk1 * B;
    Eigen::LLT<Eigen::MatrixXd> llt(Rhat);
    if (llt.info() != Eigen::Success)
      throw NumericError("Riccati step " + std::to_string(k) + ": R + B'PB not positive definite");
    const Eigen::MatrixXd BtPA = B.transpose() * Pk1 * A;
    const Eigen::MatrixXd L = llt.solve(BtPA);
    Eigen::MatrixXd P = type.Q + A.transpose() * Pk1 * A - BtPA.transpose() * L;
    P = 0.5 * (P + P.transpose());
    sched.P[k] = P;
    sched.L[k] = L;
    sched.Rhat[k] = Rhat;
    // Gamma = L' Rhat L = A'P B Rhat^{-1} B'P A.
    Eigen::MatrixXd G = L.transpose() * Rhat * L;
    sched.Gamma[k] = 0.5 * (G + G.transpose());
  }
  return sched;
}

Eigen::VectorXd control_action(const RiccatiSchedule& sched, int k, const Eigen::VectorXd& Z) {
  if (k < 0 || k >= sched.horizon)
    throw ConfigError("control_action: index " + std::to_string(k) + " outside horizon");
  if (Z.size() != sched.L[k].cols()) throw ConfigError("control_action: estimate dimension mismatch");
  return -sched.L[k] * Z;
}

double baseline_cost(const TeamType& type, const RiccatiSchedule& sched) {
  const int T = sched.horizon;
  const Eigen::MatrixXd& P0 = sched.P[0];
  double cost = type.nu.dot(P0 * type.nu) + (P0 * type.Sigma0).trace();
  for (int k = 0; k < T; ++k) cost += (sched.P[k + 1] * type.K_W).trace();
  return cost / static_cast<double>(T);
}

}  // namespace mftg
