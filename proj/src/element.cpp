#include "p1nc/element.hpp"

#include <cmath>

namespace p1nc {

namespace {

// dice-order face -> (axis, side)
inline void face_axis_side(int face, int dim, int& axis, int& side) {
  const int m = 2 * dim - 1 - face;
  if (face < dim) {
    axis = face;
    side = 0;
  } else {
    axis = m;
    side = 1;
  }
}

inline double corner_sign(int corner, int axis) {
  return (corner >> axis) & 1 ? 1.0 : -1.0;
}

}  // namespace

std::array<double, 6> face_values_of(const CellLinear& p) {
  std::array<double, 6> out{};
  for (int f = 0; f < 2 * p.dim; ++f) {
    int axis, side;
    face_axis_side(f, p.dim, axis, side);
    Point x{0, 0, 0};
    for (int t = 0; t < p.dim; ++t) x[static_cast<std::size_t>(t)] = 0.5 * p.h;
    x[static_cast<std::size_t>(axis)] = side ? p.h : 0.0;
    out[static_cast<std::size_t>(f)] = p.value(x);
  }
  return out;
}

bool dice_rule_holds(std::span<const double> v, int dim, double tol) {
  double scale = 0.0;
  for (int f = 0; f < 2 * dim; ++f) scale = std::max(scale, std::abs(v[static_cast<std::size_t>(f)]));
  const double ref = v[0] + v[static_cast<std::size_t>(2 * dim - 1)];
  for (int t = 1; t < dim; ++t) {
    const double s = v[static_cast<std::size_t>(t)] + v[static_cast<std::size_t>(2 * dim - 1 - t)];
    if (std::abs(s - ref) > tol * std::max(1.0, scale)) return false;
  }
  return true;
}

CellLinear cell_linear_from_face_values(std::span<const double> v, double h,
                                        int dim) {
  CellLinear p;
  p.dim = dim;
  p.h = h;
  double bsum = 0.0;
  for (int t = 0; t < dim; ++t) {
    p.b[static_cast<std::size_t>(t)] =
        (v[static_cast<std::size_t>(2 * dim - 1 - t)] - v[static_cast<std::size_t>(t)]) / h;
    bsum += p.b[static_cast<std::size_t>(t)];
  }
  p.a = 0.5 * (v[0] + v[static_cast<std::size_t>(2 * dim - 1)]) - 0.5 * h * bsum;
  return p;
}

CellLinear local_node_basis(int corner, double h, int dim) {
  if (corner < 0 || corner >= (1 << dim))
    throw InvalidSpecError("local_node_basis: bad corner index");
  CellLinear p;
  p.dim = dim;
  p.h = h;
  p.a = 0.25;
  for (int t = 0; t < dim; ++t) {
    const double s = corner_sign(corner, t);
    p.a -= 0.25 * s;
    p.b[static_cast<std::size_t>(t)] = 0.5 * s / h;
  }
  return p;
}

LocalMatrix local_stiffness(double h, int dim) {
  if (h <= 0.0) throw InvalidSpecError("local_stiffness: h must be positive");
  LocalMatrix m;
  m.n = 1 << dim;
  const double scale = 0.25 * std::pow(h, dim - 2);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) {
      double s = 0.0;
      for (int t = 0; t < dim; ++t) s += corner_sign(i, t) * corner_sign(j, t);
      m(i, j) = scale * s;
    }
  return m;
}

std::array<double, 8> local_load(const ScalarField& f, const Point& origin,
                                 double h, int dim,
                                 const QuadratureRule& rule) {
  std::array<double, 8> out{};
  const int corners = 1 << dim;
  const double vol = std::pow(h, dim);
  for (int q = 0; q < rule.point_count(); ++q) {
    const Point xi = rule.point(q);
    Point x = origin;
    for (int t = 0; t < dim; ++t) x[static_cast<std::size_t>(t)] += h * xi[static_cast<std::size_t>(t)];
    const double wf = rule.weight(q) * vol * f(x);
    for (int c = 0; c < corners; ++c) {
      // phi_c at local point h*xi: 1/4 + sum_t s_t (xi_t - 1/2)/2
      double phi = 0.25;
      for (int t = 0; t < dim; ++t)
        phi += 0.5 * corner_sign(c, t) * (xi[static_cast<std::size_t>(t)] - 0.5);
      out[static_cast<std::size_t>(c)] += wf * phi;
    }
  }
  return out;
}

double sigma_local(FaceFunctional kind, const CellLinear& p, int face) {
  int axis, side;
  face_axis_side(face, p.dim, axis, side);
  if (kind == FaceFunctional::midpoint) {
    Point x{0, 0, 0};
    for (int t = 0; t < p.dim; ++t) x[static_cast<std::size_t>(t)] = 0.5 * p.h;
    x[static_cast<std::size_t>(axis)] = side ? p.h : 0.0;
    return p.value(x);
  }
  // face average by Gauss quadrature over the (dim-1) transverse axes
  const QuadratureRule rule = gauss_rule(3, p.dim - 1);
  std::array<int, 2> taxis{};
  int nt = 0;
  for (int t = 0; t < p.dim; ++t)
    if (t != axis) taxis[static_cast<std::size_t>(nt++)] = t;
  double sum = 0.0;
  for (int q = 0; q < rule.point_count(); ++q) {
    const Point xi = rule.point(q);
    Point x{0, 0, 0};
    x[static_cast<std::size_t>(axis)] = side ? p.h : 0.0;
    for (int t = 0; t < nt; ++t)
      x[static_cast<std::size_t>(taxis[static_cast<std::size_t>(t)])] = p.h * xi[static_cast<std::size_t>(t)];
    sum += rule.weight(q) * p.value(x);
  }
  return sum;  // weights sum to 1 = |f|-normalized average
}

}  // namespace p1nc
