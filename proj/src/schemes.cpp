#include "p1nc/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "p1nc/kernels.hpp"

namespace p1nc {

namespace {

void require_even_2d(const PeriodicMesh& mesh, const char* what) {
  if (mesh.dim() != 2)
    throw UnsupportedError(std::string(what) + ": 3D supports option 4 only (no explicit node basis for the flat sets)");
  if (!mesh.periodic())
    throw UnsupportedError(std::string(what) + ": periodic meshes only");
  if (mesh.spec.counts[0] % 2 != 0 || mesh.spec.counts[1] % 2 != 0)
    throw UnsupportedError(std::string(what) + ": requires even cell counts in both directions");
}

// Per-cell load integrals gathered per node member; parallel over cells
// then over members, reductions in fixed order.
std::vector<double> load_vector_nodes(const PeriodicMesh& mesh,
                                      const BasisCatalog& catalog,
                                      const ScalarField& f,
                                      const QuadratureRule& rule) {
  const int corners = 1 << mesh.dim();
  const index_t ncell = mesh.cell_count();
  const double h = mesh.h();
  std::vector<double> cell_loads(static_cast<std::size_t>(ncell * corners));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (index_t c = 0; c < ncell; ++c) {
    const auto loads = local_load(f, mesh.cell_origin(c), h, mesh.dim(), rule);
    for (int cr = 0; cr < corners; ++cr)
      cell_loads[static_cast<std::size_t>(c * corners + cr)] = loads[static_cast<std::size_t>(cr)];
  }
  const auto& n = mesh.spec.counts;
  std::vector<double> b(static_cast<std::size_t>(catalog.node_member_count), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (index_t m = 0; m < catalog.node_member_count; ++m) {
    const index_t z = catalog.members[static_cast<std::size_t>(m)].node;
    const auto ijk = mesh.node_coords(z);
    double s = 0.0;
    for (int cr = 0; cr < corners; ++cr) {
      index_t ci = ijk[0] - (cr & 1);
      index_t cj = ijk[1] - ((cr >> 1) & 1);
      index_t ck = ijk[2] - ((cr >> 2) & 1);
      if (mesh.periodic()) {
        ci = (ci % n[0] + n[0]) % n[0];
        cj = (cj % n[1] + n[1]) % n[1];
        if (mesh.dim() == 3) ck = (ck % n[2] + n[2]) % n[2];
      } else {
        if (ci < 0 || ci >= n[0] || cj < 0 || cj >= n[1]) continue;
        if (mesh.dim() == 3 && (ck < 0 || ck >= n[2])) continue;
      }
      const index_t cell = mesh.cell_id(ci, cj, mesh.dim() == 3 ? ck : 0);
      s += cell_loads[static_cast<std::size_t>(cell * corners + cr)];
    }
    b[static_cast<std::size_t>(m)] = s;
  }
  return b;
}

// Load integral of f against one alternating member.
double load_alternating(const PeriodicMesh& mesh, const std::vector<double>& fv,
                        const ScalarField& f, const QuadratureRule& rule) {
  const double h = mesh.h();
  const int dim = mesh.dim();
  const double vol = std::pow(h, dim);
  const index_t ncell = mesh.cell_count();
  std::vector<double> percell(static_cast<std::size_t>(ncell), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (index_t c = 0; c < ncell; ++c) {
    const auto cf = mesh.cell_faces(c);
    std::array<double, 6> v{};
    bool nonzero = false;
    for (int ff = 0; ff < 2 * dim; ++ff) {
      v[static_cast<std::size_t>(ff)] = fv[static_cast<std::size_t>(cf[static_cast<std::size_t>(ff)])];
      nonzero = nonzero || v[static_cast<std::size_t>(ff)] != 0.0;
    }
    if (!nonzero) continue;
    const CellLinear p = cell_linear_from_face_values(
        std::span<const double>(v.data(), static_cast<std::size_t>(2 * dim)), h, dim);
    const Point o = mesh.cell_origin(c);
    double s = 0.0;
    for (int q = 0; q < rule.point_count(); ++q) {
      Point xi = rule.point(q);
      Point x = o;
      for (int t = 0; t < dim; ++t) {
        xi[static_cast<std::size_t>(t)] *= h;
        x[static_cast<std::size_t>(t)] += xi[static_cast<std::size_t>(t)];
      }
      s += rule.weight(q) * f(x) * p.value(xi);
    }
    percell[static_cast<std::size_t>(c)] = s * vol;
  }
  return kernels::sum(percell);
}

struct MeanShifted {
  ScalarField f;
  double mean = 0.0;
};

MeanShifted mean_shift(const PeriodicMesh& mesh, const ScalarField& f,
                       const QuadratureRule& rule) {
  const double h = mesh.h();
  const int dim = mesh.dim();
  const double vol = std::pow(h, dim);
  const index_t ncell = mesh.cell_count();
  std::vector<double> cf(static_cast<std::size_t>(ncell)), cf2(static_cast<std::size_t>(ncell));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (index_t c = 0; c < ncell; ++c) {
    const Point o = mesh.cell_origin(c);
    double s = 0.0, s2 = 0.0;
    for (int q = 0; q < rule.point_count(); ++q) {
      Point x = o;
      const Point xi = rule.point(q);
      for (int t = 0; t < dim; ++t) x[static_cast<std::size_t>(t)] += h * xi[static_cast<std::size_t>(t)];
      const double v = f(x);
      s += rule.weight(q) * v;
      s2 += rule.weight(q) * v * v;
    }
    cf[static_cast<std::size_t>(c)] = s * vol;
    cf2[static_cast<std::size_t>(c)] = s2 * vol;
  }
  const double integral = kernels::sum(cf);
  const double l2 = std::sqrt(std::max(0.0, kernels::sum(cf2)));
  MeanShifted out;
  if (std::abs(integral) > 1e-12 * std::max(1.0, l2)) {
    double domain = 1.0;
    for (int t = 0; t < dim; ++t) domain *= mesh.spec.lengths[static_cast<std::size_t>(t)];
    const double c0 = integral / domain;
    out.mean = c0;
    out.f = [f, c0](const Point& x) { return f(x) - c0; };
  } else {
    out.f = f;
  }
  return out;
}

SparseMatrix block_system(const SparseMatrix& node_block,
                          const Eigen::MatrixXd& alt_block,
                          std::optional<index_t> ones_row) {
  const index_t nb = node_block.rows();
  const index_t na = static_cast<index_t>(alt_block.rows());
  SparseMatrix M(nb + na, nb + na);
  M.symmetric_hint = !ones_row.has_value();
  index_t nnz = 0;
  for (index_t r = 0; r < nb; ++r) {
    if (ones_row && *ones_row == r)
      nnz += nb;
    else
      nnz += node_block.row_ptr[static_cast<std::size_t>(r) + 1] -
             node_block.row_ptr[static_cast<std::size_t>(r)];
    M.row_ptr[static_cast<std::size_t>(r) + 1] = nnz;
  }
  for (index_t r = 0; r < na; ++r) {
    for (index_t c = 0; c < na; ++c)
      if (alt_block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) != 0.0) ++nnz;
    M.row_ptr[static_cast<std::size_t>(nb + r) + 1] = nnz;
  }
  M.col.resize(static_cast<std::size_t>(nnz));
  M.val.resize(static_cast<std::size_t>(nnz));
  index_t p = 0;
  for (index_t r = 0; r < nb; ++r) {
    if (ones_row && *ones_row == r) {
      for (index_t c = 0; c < nb; ++c) {
        M.col[static_cast<std::size_t>(p)] = c;
        M.val[static_cast<std::size_t>(p)] = 1.0;
        ++p;
      }
      continue;
    }
    for (index_t q = node_block.row_ptr[static_cast<std::size_t>(r)];
         q < node_block.row_ptr[static_cast<std::size_t>(r) + 1]; ++q) {
      M.col[static_cast<std::size_t>(p)] = node_block.col[static_cast<std::size_t>(q)];
      M.val[static_cast<std::size_t>(p)] = node_block.val[static_cast<std::size_t>(q)];
      ++p;
    }
  }
  for (index_t r = 0; r < na; ++r)
    for (index_t c = 0; c < na; ++c) {
      const double v = alt_block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      if (v == 0.0) continue;
      M.col[static_cast<std::size_t>(p)] = nb + c;
      M.val[static_cast<std::size_t>(p)] = v;
      ++p;
    }
  return M;
}

SparseMatrix node_stiffness_for(const PeriodicMesh& mesh,
                                const BasisCatalog& catalog) {
  SparseMatrix S = stiffness_matrix_B(mesh);
  if (catalog.node_member_count == static_cast<index_t>(mesh.node_count()))
    return S;
  // flat set: drop the excluded node's row and column
  std::vector<std::uint8_t> keep(static_cast<std::size_t>(mesh.node_count()), 0);
  for (index_t m = 0; m < catalog.node_member_count; ++m)
    keep[static_cast<std::size_t>(catalog.members[static_cast<std::size_t>(m)].node)] = 1;
  return S.minor(keep, keep);
}

}  // namespace

double quadrature_mean(const PeriodicMesh& mesh, const ScalarField& f,
                       const QuadratureRule& rule) {
  return mean_shift(mesh, f, rule).mean;
}

AssembledSystem assemble(const PeriodicMesh& mesh, const BasisCatalog& catalog,
                         const ScalarField& f, const QuadratureRule& rule,
                         bool zero_mean_row) {
  if (!catalog.exists)
    throw InvalidSpecError("assemble: catalog does not exist for this mesh parity");
  AssembledSystem sys;
  sys.catalog = catalog;

  std::vector<double> b = load_vector_nodes(mesh, catalog, f, rule);
  const index_t na = catalog.size() - catalog.node_member_count;
  Eigen::MatrixXd SA(0, 0);
  if (na > 0) {
    SA = stiffness_matrix_A(mesh, catalog);
    b.resize(static_cast<std::size_t>(catalog.size()));
    for (index_t m = catalog.node_member_count; m < catalog.size(); ++m) {
      const std::vector<double> fv =
          member_face_values(mesh, catalog.members[static_cast<std::size_t>(m)]);
      b[static_cast<std::size_t>(m)] = load_alternating(mesh, fv, f, rule);
    }
  }

  std::optional<index_t> ones_row;
  if (zero_mean_row) {
    if (catalog.node_member_count == 0)
      throw InvalidSpecError("assemble: zero-mean row needs node members");
    ones_row = catalog.node_member_count - 1;
    b[static_cast<std::size_t>(*ones_row)] = 0.0;
  }
  const SparseMatrix SB = node_stiffness_for(mesh, catalog);
  sys.matrix = (na > 0) ? block_system(SB, SA, ones_row)
                        : (ones_row ? block_system(SB, SA, ones_row) : SB);
  sys.rhs = std::move(b);
  sys.modified_row = ones_row;
  return sys;
}

CellLinear DiscreteSolution::cell_poly(index_t cell) const {
  const int dim = mesh->dim();
  const auto cf = mesh->cell_faces(cell);
  std::array<double, 6> v{};
  for (int f = 0; f < 2 * dim; ++f)
    v[static_cast<std::size_t>(f)] = face_values[static_cast<std::size_t>(cf[static_cast<std::size_t>(f)])];
  return cell_linear_from_face_values(
      std::span<const double>(v.data(), static_cast<std::size_t>(2 * dim)), mesh->h(), dim);
}

index_t DiscreteSolution::owning_cell(const Point& x) const {
  const auto& n = mesh->spec.counts;
  std::array<index_t, 3> c{0, 0, 0};
  for (int a = 0; a < mesh->dim(); ++a) {
    const double ha = mesh->spec.h(a);
    const double s = x[static_cast<std::size_t>(a)] / ha;
    index_t i = static_cast<index_t>(std::floor(s));
    // points on a face belong to the incident cell with the lower id
    if (s == std::floor(s) && i > 0) --i;
    i = std::clamp<index_t>(i, 0, n[static_cast<std::size_t>(a)] - 1);
    c[static_cast<std::size_t>(a)] = i;
  }
  return mesh->cell_id(c[0], c[1], mesh->dim() == 3 ? c[2] : 0);
}

double DiscreteSolution::value(const Point& x) const {
  const index_t cell = owning_cell(x);
  const Point o = mesh->cell_origin(cell);
  Point local = x;
  for (int a = 0; a < mesh->dim(); ++a)
    local[static_cast<std::size_t>(a)] -= o[static_cast<std::size_t>(a)];
  return cell_poly(cell).value(local);
}

DiscreteSolution make_solution(std::shared_ptr<const PeriodicMesh> mesh,
                               BasisCatalog catalog,
                               std::vector<double> coefficients) {
  DiscreteSolution u;
  u.face_values = combination_face_values(*mesh, catalog, coefficients);
  u.mesh = std::move(mesh);
  u.catalog = std::move(catalog);
  u.coefficients = std::move(coefficients);
  return u;
}

double sigma(FaceFunctional kind, const DiscreteSolution& u, index_t face) {
  if (face < 0 || face >= u.mesh->face_count())
    throw InvalidSpecError("sigma: face id out of range");
  const Face& f = u.mesh->faces()[static_cast<std::size_t>(face)];
  index_t cell = f.cell0;
  if (cell < 0 || (f.cell1 >= 0 && f.cell1 < cell)) cell = f.cell1;
  const auto cf = u.mesh->cell_faces(cell);
  int local = -1;
  for (int ff = 0; ff < 2 * u.mesh->dim(); ++ff)
    if (cf[static_cast<std::size_t>(ff)] == face) local = ff;
  if (local < 0) throw InternalError("sigma: face not on its incident cell");
  return sigma_local(kind, u.cell_poly(cell), local);
}

namespace {

SchemeResult finish(std::shared_ptr<const PeriodicMesh> mesh,
                    BasisCatalog catalog, std::vector<double> x,
                    SolveReport rep) {
  SchemeResult out;
  out.solution = make_solution(std::move(mesh), std::move(catalog), std::move(x));
  out.report = rep;
  return out;
}

}  // namespace

SchemeResult solve_option1(std::shared_ptr<const PeriodicMesh> mesh,
                           const ScalarField& f, const SolverConfig& cfg,
                           const QuadratureRule& rule) {
  require_even_2d(*mesh, "option 1");
  const MeanShifted ff = mean_shift(*mesh, f, rule);
  const BasisCatalog eflat = build_catalog(*mesh, BasisKind::Eflat);
  AssembledSystem sys = assemble(*mesh, eflat, ff.f, rule, /*zero_mean_row=*/true);
  std::vector<double> x(sys.rhs.size(), 0.0);
  const LinearOperator op = [&sys](std::span<const double> in, std::span<double> out) {
    sys.matrix.matvec(in, out);
  };
  const SolveReport rep = gmres_restarted(op, sys.rhs, x, cfg);
  return finish(std::move(mesh), sys.catalog, std::move(x), rep);
}

SchemeResult solve_option2(std::shared_ptr<const PeriodicMesh> mesh,
                           const ScalarField& f, const SolverConfig& cfg,
                           const QuadratureRule& rule) {
  require_even_2d(*mesh, "option 2");
  const MeanShifted ff = mean_shift(*mesh, f, rule);
  const BasisCatalog eflat = build_catalog(*mesh, BasisKind::Eflat);
  AssembledSystem sys = assemble(*mesh, eflat, ff.f, rule);
  std::vector<double> x(sys.rhs.size(), 0.0);
  const LinearOperator op = [&sys](std::span<const double> in, std::span<double> out) {
    sys.matrix.matvec(in, out);
  };
  const SolveReport rep = cg(op, sys.rhs, x, cfg);

  // enforce the zero mean value along the kernel direction w
  const BasisCatalog bflat = build_catalog(*mesh, BasisKind::Bflat);
  const std::vector<double> w = unity_representation(*mesh, bflat);
  const index_t nb = bflat.size();
  double xsum = 0.0, wsum = 0.0;
  for (index_t m = 0; m < nb; ++m) {
    xsum += x[static_cast<std::size_t>(m)];
    wsum += w[static_cast<std::size_t>(m)];
  }
  const double factor = xsum / wsum;
  for (index_t m = 0; m < nb; ++m) x[static_cast<std::size_t>(m)] -= factor * w[static_cast<std::size_t>(m)];
  return finish(std::move(mesh), sys.catalog, std::move(x), rep);
}

SchemeResult solve_option3(std::shared_ptr<const PeriodicMesh> mesh,
                           const ScalarField& f, const SolverConfig& cfg,
                           const QuadratureRule& rule,
                           const IterObserver& observer) {
  require_even_2d(*mesh, "option 3");
  const MeanShifted ff = mean_shift(*mesh, f, rule);
  const BasisCatalog e = build_catalog(*mesh, BasisKind::E);
  AssembledSystem sys = assemble(*mesh, e, ff.f, rule);
  std::vector<double> x(sys.rhs.size(), 0.0);  // zero mean initial guess
  const LinearOperator op = [&sys](std::span<const double> in, std::span<double> out) {
    sys.matrix.matvec(in, out);
  };
  CgOptions opts;
  opts.observer = observer;
  const SolveReport rep = cg(op, sys.rhs, x, cfg, opts);
  return finish(std::move(mesh), sys.catalog, std::move(x), rep);
}

SchemeResult solve_option4(std::shared_ptr<const PeriodicMesh> mesh,
                           const ScalarField& f, const SolverConfig& cfg,
                           const QuadratureRule& rule,
                           const IterObserver& observer) {
  if (!mesh->periodic()) throw UnsupportedError("option 4: periodic meshes only");
  const MeanShifted ff = mean_shift(*mesh, f, rule);
  const BasisCatalog b = build_catalog(*mesh, BasisKind::B);
  AssembledSystem sys = assemble(*mesh, b, ff.f, rule);
  // consistency: the load of the mean-shifted f pairs to zero with 1_B
  const double bsum = kernels::sum(sys.rhs);
  const double bnorm = kernels::norm2(sys.rhs);
  if (bnorm > 0.0 && std::abs(bsum) > 1e-8 * bnorm * std::sqrt(static_cast<double>(sys.rhs.size())))
    throw InconsistentRhsError("option 4: right-hand side incompatible with the kernel");
  std::vector<double> x(sys.rhs.size(), 0.0);
  const LinearOperator op = [&sys](std::span<const double> in, std::span<double> out) {
    sys.matrix.matvec(in, out);
  };
  CgOptions opts;
  opts.observer = observer;
  const SolveReport rep = cg(op, sys.rhs, x, cfg, opts);
  return finish(std::move(mesh), sys.catalog, std::move(x), rep);
}

SchemeResult solve_option(int option, std::shared_ptr<const PeriodicMesh> mesh,
                          const ScalarField& f, const SolverConfig& cfg,
                          const QuadratureRule& rule) {
  switch (option) {
    case 1: return solve_option1(std::move(mesh), f, cfg, rule);
    case 2: return solve_option2(std::move(mesh), f, cfg, rule);
    case 3: return solve_option3(std::move(mesh), f, cfg, rule);
    case 4: return solve_option4(std::move(mesh), f, cfg, rule);
  }
  throw InvalidSpecError("solve_option: option must be 1..4");
}

std::pair<double, double> compare_solutions(const DiscreteSolution& a,
                                            const DiscreteSolution& b) {
  const PeriodicMesh& ma = *a.mesh;
  const PeriodicMesh& mb = *b.mesh;
  if (ma.dim() != mb.dim() || ma.spec.counts != mb.spec.counts ||
      ma.spec.lengths != mb.spec.lengths || ma.bc != mb.bc)
    throw InvalidSpecError("compare_solutions: mesh mismatch");
  const int dim = ma.dim();
  const double h = ma.h();
  const double vol = std::pow(h, dim);
  const QuadratureRule rule = gauss_rule(3, dim);
  const index_t ncell = ma.cell_count();
  std::vector<double> l2(static_cast<std::size_t>(ncell)), h1(static_cast<std::size_t>(ncell));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (index_t c = 0; c < ncell; ++c) {
    const CellLinear pa = a.cell_poly(c);
    const CellLinear pb = b.cell_poly(c);
    double g = 0.0;
    for (int t = 0; t < dim; ++t) {
      const double d = pa.b[static_cast<std::size_t>(t)] - pb.b[static_cast<std::size_t>(t)];
      g += d * d;
    }
    h1[static_cast<std::size_t>(c)] = g * vol;
    double s = 0.0;
    for (int q = 0; q < rule.point_count(); ++q) {
      Point x = rule.point(q);
      for (int t = 0; t < dim; ++t) x[static_cast<std::size_t>(t)] *= h;
      const double d = pa.value(x) - pb.value(x);
      s += rule.weight(q) * d * d;
    }
    l2[static_cast<std::size_t>(c)] = s * vol;
  }
  return {std::sqrt(kernels::sum(l2)), std::sqrt(kernels::sum(h1))};
}

void write_solution_grid(std::ostream& os, const DiscreteSolution& u,
                         const std::string& title) {
  const PeriodicMesh& mesh = *u.mesh;
  mesh.write_legacy_grid(os, title);
  const int dim = mesh.dim();
  os << "CELL_DATA " << mesh.cell_count() << "\n";
  const char* names[4] = {"coeff_const", "coeff_dx", "coeff_dy", "coeff_dz"};
  char buf[64];
  for (int comp = 0; comp <= dim; ++comp) {
    os << "SCALARS " << names[comp] << " double 1\nLOOKUP_TABLE default\n";
    for (index_t c = 0; c < mesh.cell_count(); ++c) {
      const CellLinear p = u.cell_poly(c);
      const double v = comp == 0 ? p.a : p.b[static_cast<std::size_t>(comp - 1)];
      std::snprintf(buf, sizeof buf, "%.12e\n", v);
      os << buf;
    }
  }
}

void write_face_values_csv(std::ostream& os, const DiscreteSolution& u) {
  os << "face,midpoint_value\n";
  char buf[64];
  for (index_t f = 0; f < u.mesh->face_count(); ++f) {
    std::snprintf(buf, sizeof buf, "%lld,%.12e\n", static_cast<long long>(f),
                  u.face_values[static_cast<std::size_t>(f)]);
    os << buf;
  }
}

}  // namespace p1nc
