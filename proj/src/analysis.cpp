#include "p1nc/analysis.hpp"

#include <cmath>

#include "p1nc/kernels.hpp"

namespace p1nc {

ErrorPair error_norms(const ManufacturedProblem& problem,
                      const DiscreteSolution& solution, int quad_order) {
  const PeriodicMesh& mesh = *solution.mesh;
  if (problem.dim != mesh.dim())
    throw InvalidSpecError("error_norms: dimension mismatch");
  const int dim = mesh.dim();
  const double h = mesh.h();
  const double vol = std::pow(h, dim);
  const QuadratureRule rule = gauss_rule(quad_order, dim);
  const index_t ncell = mesh.cell_count();
  std::vector<double> l2(static_cast<std::size_t>(ncell)), h1(static_cast<std::size_t>(ncell));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (index_t c = 0; c < ncell; ++c) {
    const CellLinear p = solution.cell_poly(c);
    const Point o = mesh.cell_origin(c);
    double sl = 0.0, sh = 0.0;
    for (int q = 0; q < rule.point_count(); ++q) {
      Point local = rule.point(q);
      Point x = o;
      for (int t = 0; t < dim; ++t) {
        local[static_cast<std::size_t>(t)] *= h;
        x[static_cast<std::size_t>(t)] += local[static_cast<std::size_t>(t)];
      }
      const double w = rule.weight(q);
      const double dv = problem.u(x) - p.value(local);
      sl += w * dv * dv;
      const Point g = problem.grad_u(x);
      for (int t = 0; t < dim; ++t) {
        const double dg = g[static_cast<std::size_t>(t)] - p.b[static_cast<std::size_t>(t)];
        sh += w * dg * dg;
      }
    }
    l2[static_cast<std::size_t>(c)] = sl * vol;
    h1[static_cast<std::size_t>(c)] = sh * vol;
  }
  ErrorPair out;
  out.l2 = std::sqrt(kernels::sum(l2));
  out.h1 = std::sqrt(kernels::sum(h1));
  return out;
}

double solution_l2_norm(const DiscreteSolution& u) {
  const PeriodicMesh& mesh = *u.mesh;
  const int dim = mesh.dim();
  const double h = mesh.h();
  const double vol = std::pow(h, dim);
  const QuadratureRule rule = gauss_rule(3, dim);
  const index_t ncell = mesh.cell_count();
  std::vector<double> acc(static_cast<std::size_t>(ncell));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (index_t c = 0; c < ncell; ++c) {
    const CellLinear p = u.cell_poly(c);
    double s = 0.0;
    for (int q = 0; q < rule.point_count(); ++q) {
      Point local = rule.point(q);
      for (int t = 0; t < dim; ++t) local[static_cast<std::size_t>(t)] *= h;
      const double v = p.value(local);
      s += rule.weight(q) * v * v;
    }
    acc[static_cast<std::size_t>(c)] = s * vol;
  }
  return std::sqrt(kernels::sum(acc));
}

namespace {

GridSpec unit_box(int dim, index_t n) {
  GridSpec spec;
  spec.dim = dim;
  spec.counts = {n, n, dim == 3 ? n : 1};
  spec.lengths = {1.0, 1.0, 1.0};
  return spec;
}

}  // namespace

ConvergenceTable convergence_study(const ManufacturedProblem& problem,
                                   int option,
                                   const std::vector<index_t>& n_list,
                                   const SolverConfig& cfg, int quad_order) {
  ConvergenceTable table;
  table.example = problem.name;
  table.option = option;
  const QuadratureRule rule = gauss_rule(quad_order, problem.dim);
  for (index_t n : n_list) {
    auto mesh = make_mesh(unit_box(problem.dim, n), BC::periodic);
    const SchemeResult res = solve_option(option, mesh, problem.f, cfg, rule);
    const ErrorPair err = error_norms(problem, res.solution, quad_order);
    ConvergenceRow row;
    row.n = n;
    row.h = 1.0 / static_cast<double>(n);
    row.h1 = err.h1;
    row.l2 = err.l2;
    row.iterations = res.report.iterations;
    row.converged = res.report.converged;
    if (!table.rows.empty()) {
      const ConvergenceRow& prev = table.rows.back();
      const double ratio = std::log2(prev.h / row.h);
      row.h1_order = std::log2(prev.h1 / row.h1) / ratio;
      row.l2_order = std::log2(prev.l2 / row.l2) / ratio;
    }
    table.rows.push_back(row);
  }
  return table;
}

std::vector<RankDeficiencyEntry> rank_deficiency_study(
    const std::vector<std::array<index_t, 3>>& triples) {
  std::vector<RankDeficiencyEntry> out;
  for (const auto& t : triples) {
    GridSpec spec;
    spec.dim = 3;
    spec.counts = t;
    spec.lengths = {static_cast<double>(t[0]), static_cast<double>(t[1]),
                    static_cast<double>(t[2])};
    RankDeficiencyEntry e;
    e.nx = t[0];
    e.ny = t[1];
    e.nz = t[2];
    e.predicted = dim_formulas(spec, BC::periodic).dim_ker_stiffness;
    e.oracle = constraint_rank_oracle(spec, BC::periodic).dim_ker_stiffness;
    out.push_back(e);
  }
  return out;
}

EquivalenceReport scheme_equivalence_study(const ManufacturedProblem& problem,
                                           const std::vector<index_t>& n_list,
                                           const SolverConfig& cfg,
                                           int quad_order) {
  if (problem.dim != 2)
    throw UnsupportedError("scheme_equivalence_study: 2D problems only");
  EquivalenceReport report;
  const QuadratureRule rule = gauss_rule(quad_order, 2);
  for (index_t n : n_list) {
    auto mesh = make_mesh(unit_box(2, n), BC::periodic);
    std::vector<SchemeResult> res;
    for (int opt = 1; opt <= 4; ++opt)
      res.push_back(solve_option(opt, mesh, problem.f, cfg, rule));
    EquivalenceRow row;
    row.n = n;
    row.h = 1.0 / static_cast<double>(n);
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const auto [dl2, dh1] =
            compare_solutions(res[static_cast<std::size_t>(a)].solution,
                              res[static_cast<std::size_t>(b)].solution);
        row.max_pairwise_l2 = std::max(row.max_pairwise_l2, dl2);
        row.max_pairwise_h1 = std::max(row.max_pairwise_h1, dh1);
      }
    const auto [gl2, gh1] = compare_solutions(res[2].solution, res[3].solution);
    row.gap_l2 = gl2;
    row.gap_h1 = gh1;
    row.scale_l2 = solution_l2_norm(res[2].solution);
    for (int opt = 0; opt < 4; ++opt)
      row.iterations[static_cast<std::size_t>(opt)] =
          res[static_cast<std::size_t>(opt)].report.iterations;
    report.rows.push_back(row);
  }
  // least-squares slope of log(gap) against log(h)
  auto fit = [&](auto get) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(report.rows.size());
    for (const auto& r : report.rows) {
      const double x = std::log(r.h), y = std::log(get(r));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
  };
  if (report.rows.size() >= 2) {
    report.slope_l2 = fit([](const EquivalenceRow& r) { return r.gap_l2; });
    report.slope_h1 = fit([](const EquivalenceRow& r) { return r.gap_h1; });
  }
  return report;
}

}  // namespace p1nc
