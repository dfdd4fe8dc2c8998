#ifndef P1NC_ELEMENT_HPP
#define P1NC_ELEMENT_HPP

#include <array>
#include <span>

#include "p1nc/core.hpp"
#include "p1nc/quadrature.hpp"

namespace p1nc {

/// Linear polynomial on one cell in local coordinates [0,h]^dim:
/// p(x) = a + b[0] x + b[1] y (+ b[2] z).
struct CellLinear {
  int dim = 2;
  double h = 1.0;
  double a = 0.0;
  std::array<double, 3> b{0.0, 0.0, 0.0};

  double value(const Point& x) const {
    double v = a;
    for (int t = 0; t < dim; ++t) v += b[static_cast<std::size_t>(t)] * x[static_cast<std::size_t>(t)];
    return v;
  }
  const std::array<double, 3>& gradient() const { return b; }
};

// Face indexing below follows the dice order [x-,y-,(z-),(z+),y+,x+]:
// opposite faces sit at mirrored positions m and 2*dim-1-m.

/// Midpoint values of p on the 2*dim faces of its cell, in dice order.
std::array<double, 6> face_values_of(const CellLinear& p);

/// Whether face-midpoint data satisfies the dice rule: equal sums over every
/// opposite face pair.
bool dice_rule_holds(std::span<const double> face_vals, int dim, double tol);

/// Reconstruct the unique cell linear with the given admissible face
/// midpoint values (dice order).
CellLinear cell_linear_from_face_values(std::span<const double> face_vals,
                                        double h, int dim);

/// Node-based local shape function of a cell corner (corner bits: x bit 0,
/// y bit 1, z bit 2): midpoint value 1/2 on the dim faces meeting the
/// corner, 0 on the others.
CellLinear local_node_basis(int corner, double h, int dim);

/// Small dense matrix indexed by cell corners.
struct LocalMatrix {
  int n = 0;
  std::array<double, 64> a{};
  double& operator()(int r, int c) { return a[static_cast<std::size_t>(r * n + c)]; }
  double operator()(int r, int c) const { return a[static_cast<std::size_t>(r * n + c)]; }
};

/// Per-cell stiffness of the node-based shape functions:
/// (i,j) -> integral over the cell of grad(phi_i) . grad(phi_j).
LocalMatrix local_stiffness(double h, int dim);

/// Per-corner load integrals over one cell with origin `origin`:
/// entry c = integral of f * phi_c.
std::array<double, 8> local_load(const ScalarField& f, const Point& origin,
                                 double h, int dim, const QuadratureRule& rule);

enum class FaceFunctional { midpoint, average };

/// sigma evaluated on a cell polynomial for the local face `face` (dice
/// order). The average functional integrates over the face with a Gauss
/// rule; both coincide on linear polynomials.
double sigma_local(FaceFunctional kind, const CellLinear& p, int face);

}  // namespace p1nc

#endif
