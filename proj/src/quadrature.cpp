#include "mftg/quadrature.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "mftg/types.hpp"

namespace mftg {

GaussHermite::GaussHermite(int n) {
  if (n < 1) throw ConfigError("quadrature order must be >= 1");
  // Jacobi matrix for Hermite polynomials: zero diagonal, off-diagonal sqrt(j/2).
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    const double b = std::sqrt(0.5 * j);
    J(j, j - 1) = b;
    J(j - 1, j) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = v0 * v0;  // mu_0 = sqrt(pi) cancels against the 1/sqrt(pi) normalization
  }
}

}  // namespace mftg
