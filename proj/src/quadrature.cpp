#include "p1nc/quadrature.hpp"

#include <cmath>

namespace p1nc {

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void legendre_points(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // evaluate P_n(t) and P_n'(t) via recurrence
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[n - 1 - i] = t;
    w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

int QuadratureRule::point_count() const {
  int n = 1;
  for (int d = 0; d < dim; ++d) n *= points_per_axis;
  return n;
}

Point QuadratureRule::point(int q) const {
  Point p{0.0, 0.0, 0.0};
  int rest = q;
  for (int d = 0; d < dim; ++d) {
    p[static_cast<std::size_t>(d)] = nodes1d[static_cast<std::size_t>(rest % points_per_axis)];
    rest /= points_per_axis;
  }
  return p;
}

double QuadratureRule::weight(int q) const {
  double w = 1.0;
  int rest = q;
  for (int d = 0; d < dim; ++d) {
    w *= weights1d[static_cast<std::size_t>(rest % points_per_axis)];
    rest /= points_per_axis;
  }
  return w;
}

QuadratureRule gauss_rule(int points_per_axis, int dim) {
  if (points_per_axis < 1 || dim < 1 || dim > 3)
    throw InvalidSpecError("gauss_rule: invalid order or dimension");
  QuadratureRule rule;
  rule.dim = dim;
  rule.points_per_axis = points_per_axis;
  std::vector<double> x, w;
  legendre_points(points_per_axis, x, w);
  rule.nodes1d.resize(x.size());
  rule.weights1d.resize(w.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.nodes1d[i] = 0.5 * (x[i] + 1.0);  // map to [0,1]
    rule.weights1d[i] = 0.5 * w[i];
  }
  return rule;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double m, double fm, double whole,
                double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  return adaptive(f, a, fa, b, fb, m, fm, whole, tol, 50);
}

}  // namespace p1nc
