#include "dgq/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace dgq {

namespace {

// Golub-Welsch: nodes of the n-point Gauss rule for the Jacobi weight
// (1-x)^alpha (1+x)^beta on [-1,1] are the eigenvalues of the symmetric
// tridiagonal recurrence matrix; weights come from the first eigenvector
// components scaled by the zeroth moment.
void gauss_jacobi(int n, double alpha, double beta,
                  Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be >= 1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double denom = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
    J(k, k) = (denom == 0.0) ? (beta - alpha) / (ab + 2.0)
                             : (beta * beta - alpha * alpha) / denom;
  }
  for (int k = 1; k < n; ++k) {
    const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
    const double den = std::pow(2.0 * k + ab, 2) * (2.0 * k + ab + 1.0) *
                       (2.0 * k + ab - 1.0);
    const double b = std::sqrt(num / den);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes = es.eigenvalues();
  const double mu0 = std::pow(2.0, ab + 1.0) *
                     std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                              std::lgamma(ab + 2.0));
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

}  // namespace

IntervalRule interval_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("interval_rule: negative degree");
  const int n = degree / 2 + 1;
  Eigen::VectorXd x, w;
  gauss_jacobi(n, 0.0, 0.0, x, w);
  IntervalRule rule;
  rule.points = (x.array() + 1.0) / 2.0;
  rule.weights = w / 2.0;
  rule.exact_degree = 2 * n - 1;
  return rule;
}

TriangleRule triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: negative degree");
  // Duffy substitution x = xi (1 - eta), y = eta maps the triangle to the
  // unit square with an extra factor (1 - eta); the eta direction therefore
  // uses a Gauss-Jacobi (1,0) rule so the factor is absorbed in the weight.
  const int n = degree / 2 + 1;
  IntervalRule gl = interval_rule(degree);
  Eigen::VectorXd xj, wj;
  gauss_jacobi(n, 1.0, 0.0, xj, wj);

  const int nx = static_cast<int>(gl.points.size());
  TriangleRule rule;
  rule.points.resize(2, nx * n);
  rule.weights.resize(nx * n);
  int idx = 0;
  for (int j = 0; j < n; ++j) {
    const double eta = (xj[j] + 1.0) / 2.0;
    for (int i = 0; i < nx; ++i, ++idx) {
      rule.points(0, idx) = gl.points[i] * (1.0 - eta);
      rule.points(1, idx) = eta;
      rule.weights[idx] = gl.weights[i] * wj[j] / 4.0;
    }
  }
  rule.exact_degree = 2 * n - 1;
  return rule;
}

double triangle_monomial_integral(int a, int b) {
  if (a < 0 || b < 0) throw std::invalid_argument("negative monomial exponent");
  return std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                  std::lgamma(a + b + 3.0));
}

}  // namespace dgq
