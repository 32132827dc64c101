#pragma once

#include <Eigen/Dense>

namespace dgq {

/// Gauss rule on the reference interval [0,1]: integrates polynomials of
/// degree <= 2n-1 exactly with n points.
struct IntervalRule {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
  int exact_degree = 0;
};

/// Quadrature on the reference triangle {(x,y) : x,y >= 0, x+y <= 1}.
/// Built from a collapsed (Duffy) tensor product of Gauss-Legendre and
/// Gauss-Jacobi rules; all weights are strictly positive.
struct TriangleRule {
  Eigen::Matrix2Xd points;   // reference coordinates, one column per point
  Eigen::VectorXd weights;   // sum equals reference area 1/2
  int exact_degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss-Legendre rule on [0,1] exact for polynomials of degree `degree`.
IntervalRule interval_rule(int degree);

/// Triangle rule exact for bivariate polynomials of total degree `degree`.
TriangleRule triangle_rule(int degree);

/// Exact value of the monomial integral over the reference triangle,
/// int x^a y^b dx dy = a! b! / (a+b+2)!.
double triangle_monomial_integral(int a, int b);

}  // namespace dgq
