#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mftg {

// Invalid user input (config files, CLI arguments, malformed schemas).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric breakdown inside an algorithm (NaN targets, undersized grids, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One agent type: plant matrices, cost weights, noise and initial-state
// statistics, and the fraction of the population with this type.
struct TeamType {
  std::string id;
  double prob = 1.0;          // population fraction
  Eigen::MatrixXd A;          // n x n
  Eigen::MatrixXd B;          // n x m
  Eigen::MatrixXd Q;          // n x n, symmetric PSD
  Eigen::MatrixXd R;          // m x m, symmetric PD
  Eigen::MatrixXd K_W;        // n x n, process-noise covariance, PD
  Eigen::MatrixXd Sigma0;     // n x n, initial-state covariance, PD
  Eigen::VectorXd nu;         // n, initial-state mean

  int state_dim() const { return static_cast<int>(A.rows()); }
  int input_dim() const { return static_cast<int>(B.cols()); }
  bool scalar() const { return state_dim() == 1 && input_dim() == 1; }

  // Scalar accessors; only valid when scalar().
  double a() const { return A(0, 0); }
  double b() const { return B(0, 0); }
  double q() const { return Q(0, 0); }
  double r() const { return R(0, 0); }
  double kw() const { return K_W(0, 0); }
  double sigma0() const { return Sigma0(0, 0); }
  double mean0() const { return nu(0); }

  // Throws ConfigError on dimension mismatch, indefinite weights, an
  // uncontrollable (A, B) pair, or prob outside [0, 1].
  void validate() const;
};

// Validates each type and that the probabilities sum to 1 (within 1e-12).
void validate_type_set(const std::vector<TeamType>& types);

// Convenience constructor for scalar (n = m = 1) types.
TeamType scalar_team_type(std::string id, double prob, double a, double b, double q, double r,
                          double kw, double sigma0, double nu);

}  // namespace mftg
