#include "dgq/basis.hpp"

#include <cmath>
#include <stdexcept>

#include "dgq/quadrature.hpp"

namespace dgq {

namespace {

// Jacobi polynomial P_n^(alpha,beta), normalized to unit L2 norm under the
// weight (1-x)^alpha (1+x)^beta on [-1,1].
double jacobi_p(double x, double alpha, double beta, int n) {
  const double ab = alpha + beta;
  const double gamma0 = std::pow(2.0, ab + 1.0) / (ab + 1.0) *
                        std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                                 std::lgamma(ab + 1.0));
  double pl_prev = 1.0 / std::sqrt(gamma0);
  if (n == 0) return pl_prev;
  const double gamma1 = (alpha + 1.0) * (beta + 1.0) / (ab + 3.0) * gamma0;
  double pl = ((ab + 2.0) * x / 2.0 + (alpha - beta) / 2.0) / std::sqrt(gamma1);
  if (n == 1) return pl;
  double aold = 2.0 / (2.0 + ab) *
                std::sqrt((alpha + 1.0) * (beta + 1.0) / (ab + 3.0));
  for (int i = 1; i < n; ++i) {
    const double h1 = 2.0 * i + ab;
    const double anew = 2.0 / (h1 + 2.0) *
                        std::sqrt((i + 1.0) * (i + 1.0 + ab) * (i + 1.0 + alpha) *
                                  (i + 1.0 + beta) / ((h1 + 1.0) * (h1 + 3.0)));
    const double bnew = -(alpha * alpha - beta * beta) / (h1 * (h1 + 2.0));
    const double pl_next = (-aold * pl_prev + (x - bnew) * pl) / anew;
    pl_prev = pl;
    pl = pl_next;
    aold = anew;
  }
  return pl;
}

double grad_jacobi_p(double x, double alpha, double beta, int n) {
  if (n == 0) return 0.0;
  return std::sqrt(n * (n + alpha + beta + 1.0)) *
         jacobi_p(x, alpha + 1.0, beta + 1.0, n - 1);
}

// Collapsed coordinates of the (-1,-1),(1,-1),(-1,1) triangle.
void rs_to_ab(double r, double s, double& a, double& b) {
  a = (s != 1.0) ? 2.0 * (1.0 + r) / (1.0 - s) - 1.0 : -1.0;
  b = s;
}

double simplex_2d_p(double a, double b, int i, int j) {
  return std::sqrt(2.0) * jacobi_p(a, 0.0, 0.0, i) *
         jacobi_p(b, 2.0 * i + 1.0, 0.0, j) * std::pow(1.0 - b, i);
}

void grad_simplex_2d_p(double a, double b, int id, int jd,
                       double& dmodedr, double& dmodeds) {
  const double fa = jacobi_p(a, 0.0, 0.0, id);
  const double dfa = grad_jacobi_p(a, 0.0, 0.0, id);
  const double gb = jacobi_p(b, 2.0 * id + 1.0, 0.0, jd);
  const double dgb = grad_jacobi_p(b, 2.0 * id + 1.0, 0.0, jd);

  dmodedr = dfa * gb;
  if (id > 0) dmodedr *= std::pow(0.5 * (1.0 - b), id - 1);

  dmodeds = dfa * (gb * (0.5 * (1.0 + a)));
  if (id > 0) dmodeds *= std::pow(0.5 * (1.0 - b), id - 1);
  double tmp = dgb * std::pow(0.5 * (1.0 - b), id);
  if (id > 0) tmp -= 0.5 * id * gb * std::pow(0.5 * (1.0 - b), id - 1);
  dmodeds += fa * tmp;

  const double scale = std::pow(2.0, id + 0.5);
  dmodedr *= scale;
  dmodeds *= scale;
}

}  // namespace

Basis::Basis(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("Basis: degree must be >= 0");
  size_ = (degree + 1) * (degree + 2) / 2;

  // Derivative coefficient matrices via an exact quadrature on the reference
  // triangle: orthonormality gives A^d(s,j) = int (d phi_j / d xi_d) phi_s.
  TriangleRule rule = triangle_rule(2 * degree + 2);
  const Eigen::MatrixXd vals = values(rule.points);
  const Eigen::MatrixXd grads = gradients(rule.points);
  for (int d = 0; d < 2; ++d) {
    deriv_[d].resize(size_, size_);
    for (int j = 0; j < size_; ++j)
      for (int s = 0; s < size_; ++s) {
        double acc = 0.0;
        for (int g = 0; g < rule.size(); ++g)
          acc += rule.weights[g] * grads(2 * j + d, g) * vals(s, g);
        deriv_[d](s, j) = acc;
      }
  }
}

Eigen::MatrixXd Basis::values(const Eigen::Matrix2Xd& ref_points) const {
  const int npts = static_cast<int>(ref_points.cols());
  Eigen::MatrixXd out(size_, npts);
  for (int g = 0; g < npts; ++g) {
    const double r = 2.0 * ref_points(0, g) - 1.0;
    const double s = 2.0 * ref_points(1, g) - 1.0;
    double a, b;
    rs_to_ab(r, s, a, b);
    int k = 0;
    for (int i = 0; i <= degree_; ++i)
      for (int j = 0; j <= degree_ - i; ++j, ++k)
        out(k, g) = 2.0 * simplex_2d_p(a, b, i, j);
  }
  return out;
}

Eigen::MatrixXd Basis::gradients(const Eigen::Matrix2Xd& ref_points) const {
  const int npts = static_cast<int>(ref_points.cols());
  Eigen::MatrixXd out(2 * size_, npts);
  for (int g = 0; g < npts; ++g) {
    const double r = 2.0 * ref_points(0, g) - 1.0;
    const double s = 2.0 * ref_points(1, g) - 1.0;
    double a, b;
    rs_to_ab(r, s, a, b);
    int k = 0;
    for (int i = 0; i <= degree_; ++i)
      for (int j = 0; j <= degree_ - i; ++j, ++k) {
        double dr, ds;
        grad_simplex_2d_p(a, b, i, j, dr, ds);
        // unit-triangle coordinates: r = 2x-1, s = 2y-1, mode scaled by 2
        out(2 * k + 0, g) = 4.0 * dr;
        out(2 * k + 1, g) = 4.0 * ds;
      }
  }
  return out;
}

long space_dimension(int degree, long n_elements) {
  if (degree < 0) throw std::invalid_argument("space_dimension: degree < 0");
  if (n_elements < 0) throw std::invalid_argument("space_dimension: n_elements < 0");
  return n_elements * static_cast<long>((degree + 1) * (degree + 2) / 2);
}

}  // namespace dgq
