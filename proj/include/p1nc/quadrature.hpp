#ifndef P1NC_QUADRATURE_HPP
#define P1NC_QUADRATURE_HPP

#include <array>
#include <vector>

#include "p1nc/core.hpp"

namespace p1nc {

/// Tensor Gauss-Legendre rule on the reference cell [0,1]^dim.
/// Weights sum to 1; each axis is exact for polynomials of degree
/// 2*points_per_axis - 1.
struct QuadratureRule {
  int dim = 2;
  int points_per_axis = 3;
  std::vector<double> nodes1d;    // on [0,1]
  std::vector<double> weights1d;  // sum to 1

  int point_count() const;
  /// q-th tensor point (z component 0 in 2D) and its weight.
  Point point(int q) const;
  double weight(int q) const;
};

QuadratureRule gauss_rule(int points_per_axis, int dim);

/// Adaptive Simpson integration on [a,b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol);

}  // namespace p1nc

#endif
