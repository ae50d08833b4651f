#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mftg/types.hpp"

namespace mftg {

// Backward Riccati solution over a finite horizon T with zero terminal cost:
//   P[k] = Q + A'P[k+1]A - A'P[k+1]B (R + B'P[k+1]B)^{-1} B'P[k+1]A,  P[T] = 0,
// feedback gains L[k] = Rhat[k]^{-1} B'P[k+1]A with Rhat[k] = R + B'P[k+1]B,
// and estimation-error weights Gamma[k] = L[k]' Rhat[k] L[k].
struct RiccatiSchedule {
  int horizon = 0;
  std::vector<Eigen::MatrixXd> P;      // T+1 entries, symmetric PSD
  std::vector<Eigen::MatrixXd> L;      // T entries, m x n
  std::vector<Eigen::MatrixXd> Gamma;  // T entries, symmetric PSD; Gamma[T-1] = 0
  std::vector<Eigen::MatrixXd> Rhat;   // T entries, symmetric PD

  // Scalar accessors; only valid for scalar plants.
  double p(int k) const { return P[k](0, 0); }
  double l(int k) const { return L[k](0, 0); }
  double gamma(int k) const { return Gamma[k](0, 0); }
};

RiccatiSchedule solve_riccati(const TeamType& type, int horizon);

// Certainty-equivalent feedback U_k = -L[k] Z using the state estimate Z. The
// closed loop with Z = X satisfies X_{k+1} = (A - B L[k]) X_k + W_k.
Eigen::VectorXd control_action(const RiccatiSchedule& sched, int k, const Eigen::VectorXd& Z);

// Time-averaged closed-loop cost net of all estimation-error terms: the part
// of the objective no sensing policy can influence,
//   (1/T) (nu'P[0]nu + tr(P[0] Sigma0)) + (1/T) sum_k tr(P[k+1] K_W).
double baseline_cost(const TeamType& type, const RiccatiSchedule& sched);

}  // namespace mftg
