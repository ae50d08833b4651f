#include "mftg/types.hpp"

#include <cmath>

namespace mftg {
namespace {

bool symmetric(const Eigen::MatrixXd& M, double tol = 1e-10) {
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, M.cwiseAbs().maxCoeff());
}

bool positive_definite(const Eigen::MatrixXd& M) {
  if (!symmetric(M)) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  return llt.info() == Eigen::Success;
}

bool positive_semidefinite(const Eigen::MatrixXd& M) {
  if (!symmetric(M)) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -1e-10 * std::max(1.0, M.cwiseAbs().maxCoeff());
}

}  // namespace

void TeamType::validate() const {
  const int n = state_dim();
  const int m = input_dim();
  auto fail = [this](const std::string& what) {
    throw ConfigError("type '" + id + "': " + what);
  };
  if (n < 1 || m < 1) fail("empty state or input dimension");
  if (A.rows() != n || A.cols() != n) fail("A must be n x n");
  if (B.rows() != n) fail("B row count must match A");
  if (Q.rows() != n || Q.cols() != n) fail("Q must be n x n");
  if (R.rows() != m || R.cols() != m) fail("R must be m x m");
  if (K_W.rows() != n || K_W.cols() != n) fail("K_W must be n x n");
  if (Sigma0.rows() != n || Sigma0.cols() != n) fail("Sigma0 must be n x n");
  if (nu.size() != n) fail("nu must have length n");
  if (!(prob >= 0.0 && prob <= 1.0)) fail("prob must lie in [0, 1]");
  if (!positive_semidefinite(Q)) fail("Q must be symmetric positive semidefinite");
  if (!positive_definite(R)) fail("R must be symmetric positive definite");
  if (!positive_definite(K_W)) fail("K_W must be symmetric positive definite");
  if (!positive_definite(Sigma0)) fail("Sigma0 must be symmetric positive definite");

  // Controllability: [B, AB, ..., A^{n-1}B] must have rank n.
  Eigen::MatrixXd ctrb(n, n * m);
  Eigen::MatrixXd Ak = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    ctrb.block(0, i * m, n, m) = Ak * B;
    Ak = A * Ak;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ctrb);
  if (lu.rank() < n) fail("(A, B) is not controllable");
}

void validate_type_set(const std::vector<TeamType>& types) {
  if (types.empty()) throw ConfigError("type set is empty");
  double total = 0.0;
  for (const auto& t : types) {
    t.validate();
    total += t.prob;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ConfigError("type probabilities sum to " + std::to_string(total) + ", expected 1");
}

TeamType scalar_team_type(std::string id, double prob, double a, double b, double q, double r,
                          double kw, double sigma0, double nu) {
  TeamType t;
  t.id = std::move(id);
  t.prob = prob;
  t.A = Eigen::MatrixXd::Constant(1, 1, a);
  t.B = Eigen::MatrixXd::Constant(1, 1, b);
  t.Q = Eigen::MatrixXd::Constant(1, 1, q);
  t.R = Eigen::MatrixXd::Constant(1, 1, r);
  t.K_W = Eigen::MatrixXd::Constant(1, 1, kw);
  t.Sigma0 = Eigen::MatrixXd::Constant(1, 1, sigma0);
  t.nu = Eigen::VectorXd::Constant(1, nu);
  return t;
}

}  // namespace mftg
