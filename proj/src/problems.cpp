#include "p1nc/problems.hpp"

#include <cmath>

#include "p1nc/quadrature.hpp"

namespace p1nc {

namespace {

// --- example 1: truncated Fourier series of the square wave ---

double square_wave_s(double t) {
  double s = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const double m = 2 * k - 1;
    s += 4.0 / (m * M_PI) * std::sin(2.0 * m * M_PI * t);
  }
  return s;
}

double square_wave_ds(double t) {
  double s = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const double m = 2 * k - 1;
    s += 8.0 * std::cos(2.0 * m * M_PI * t);
  }
  return s;
}

double square_wave_dds(double t) {
  double s = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const double m = 2 * k - 1;
    s -= 16.0 * m * M_PI * std::sin(2.0 * m * M_PI * t);
  }
  return s;
}

// --- example 2: bump profile exp(-1/(1-(2t-1)^2)) t^2 (1-t) + C ---

struct BumpEval {
  double s, ds, dds;
};

BumpEval bump_eval(double t, double C) {
  BumpEval out{C, 0.0, 0.0};
  const double r = 2.0 * t - 1.0;
  const double w = 1.0 - r * r;
  if (w <= 0.0) return out;
  const double g = std::exp(-1.0 / w);
  if (g == 0.0) return out;
  const double dw = -4.0 * r;
  const double q1 = dw / (w * w);                          // (d/dt)(-1/w)
  const double q2 = -8.0 / (w * w) - 2.0 * dw * dw / (w * w * w);
  const double dg = g * q1;
  const double ddg = g * (q1 * q1 + q2);
  const double p = t * t * (1.0 - t);
  const double dp = 2.0 * t - 3.0 * t * t;
  const double ddp = 2.0 - 6.0 * t;
  out.s = g * p + C;
  out.ds = dg * p + g * dp;
  out.dds = ddg * p + 2.0 * dg * dp + g * ddp;
  return out;
}

double bump_constant() {
  const double integral = integrate_adaptive(
      [](double t) { return bump_eval(t, 0.0).s; }, 0.0, 1.0, 1e-15);
  return -integral;
}

ManufacturedProblem make_tensor2d(const std::string& name,
                                  double (*s)(double), double (*ds)(double),
                                  double (*dds)(double)) {
  ManufacturedProblem p;
  p.name = name;
  p.dim = 2;
  p.u = [=](const Point& x) { return s(x[0]) * s(x[1]); };
  p.grad_u = [=](const Point& x) {
    return Point{ds(x[0]) * s(x[1]), s(x[0]) * ds(x[1]), 0.0};
  };
  p.f = [=](const Point& x) {
    return -(dds(x[0]) * s(x[1]) + s(x[0]) * dds(x[1]));
  };
  return p;
}

}  // namespace

const ManufacturedProblem& example1() {
  static const ManufacturedProblem p =
      make_tensor2d("ex1", &square_wave_s, &square_wave_ds, &square_wave_dds);
  return p;
}

const ManufacturedProblem& example2() {
  static const ManufacturedProblem p = [] {
    const double C = bump_constant();
    ManufacturedProblem q;
    q.name = "ex2";
    q.dim = 2;
    q.u = [C](const Point& x) {
      return bump_eval(x[0], C).s * bump_eval(x[1], C).s;
    };
    q.grad_u = [C](const Point& x) {
      const BumpEval a = bump_eval(x[0], C), b = bump_eval(x[1], C);
      return Point{a.ds * b.s, a.s * b.ds, 0.0};
    };
    q.f = [C](const Point& x) {
      const BumpEval a = bump_eval(x[0], C), b = bump_eval(x[1], C);
      return -(a.dds * b.s + a.s * b.dds);
    };
    return q;
  }();
  return p;
}

const ManufacturedProblem& example3() {
  static const ManufacturedProblem p = [] {
    ManufacturedProblem q;
    q.name = "ex3";
    q.dim = 3;
    const double w = 2.0 * M_PI;
    q.u = [w](const Point& x) {
      return std::sin(w * x[0]) * std::sin(w * x[1]) * std::sin(w * x[2]);
    };
    q.grad_u = [w](const Point& x) {
      const double sx = std::sin(w * x[0]), sy = std::sin(w * x[1]), sz = std::sin(w * x[2]);
      const double cx = std::cos(w * x[0]), cy = std::cos(w * x[1]), cz = std::cos(w * x[2]);
      return Point{w * cx * sy * sz, w * sx * cy * sz, w * sx * sy * cz};
    };
    q.f = [w](const Point& x) {
      return 3.0 * w * w * std::sin(w * x[0]) * std::sin(w * x[1]) *
             std::sin(w * x[2]);
    };
    return q;
  }();
  return p;
}

const ManufacturedProblem& problem_by_name(const std::string& name) {
  if (name == "ex1") return example1();
  if (name == "ex2") return example2();
  if (name == "ex3") return example3();
  throw InvalidSpecError("unknown example: " + name + " (expected ex1, ex2, ex3)");
}

}  // namespace p1nc
