#ifndef P1NC_SCHEMES_HPP
#define P1NC_SCHEMES_HPP

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "p1nc/element.hpp"
#include "p1nc/mesh.hpp"
#include "p1nc/solvers.hpp"
#include "p1nc/space.hpp"
#include "p1nc/sparse.hpp"

namespace p1nc {

struct AssembledSystem {
  SparseMatrix matrix;
  std::vector<double> rhs;
  BasisCatalog catalog;
  std::optional<index_t> modified_row;  // all-ones zero-mean row when set
};

/// Assembles the stiffness system for the catalog's function set. The
/// E/Eflat systems are block-diagonal (node-based block and alternating
/// block); with zero_mean_row the last node-block row is replaced by ones
/// and the matching rhs entry by zero.
AssembledSystem assemble(const PeriodicMesh& mesh, const BasisCatalog& catalog,
                         const ScalarField& f, const QuadratureRule& rule,
                         bool zero_mean_row = false);

/// Coefficient vector over a catalog, evaluable cellwise as a linear
/// polynomial through the cached face-midpoint values.
struct DiscreteSolution {
  std::shared_ptr<const PeriodicMesh> mesh;
  BasisCatalog catalog;
  std::vector<double> coefficients;
  std::vector<double> face_values;

  CellLinear cell_poly(index_t cell) const;
  index_t owning_cell(const Point& x) const;
  double value(const Point& x) const;
};

DiscreteSolution make_solution(std::shared_ptr<const PeriodicMesh> mesh,
                               BasisCatalog catalog,
                               std::vector<double> coefficients);

/// sigma functional of a discrete solution on a mesh face, evaluated on the
/// incident cell with the lower id.
double sigma(FaceFunctional kind, const DiscreteSolution& u, index_t face);

struct SchemeResult {
  DiscreteSolution solution;
  SolveReport report;
};

/// Option 1: nonsingular nonsymmetric system over Eflat (zero-mean row in
/// place of the redundant one), solved by restarted GMRES. 2D even/even.
SchemeResult solve_option1(std::shared_ptr<const PeriodicMesh> mesh,
                           const ScalarField& f, const SolverConfig& cfg,
                           const QuadratureRule& rule);

/// Option 2: singular SPSD system over Eflat (rank deficiency 1), CG plus a
/// zero-mean post-processing step along the unity representation.
SchemeResult solve_option2(std::shared_ptr<const PeriodicMesh> mesh,
                           const ScalarField& f, const SolverConfig& cfg,
                           const QuadratureRule& rule);

/// Option 3: singular SPSD system over E (rank deficiency 2); a zero-mean
/// initial guess keeps every CG iterate zero-mean, no post-processing.
SchemeResult solve_option3(std::shared_ptr<const PeriodicMesh> mesh,
                           const ScalarField& f, const SolverConfig& cfg,
                           const QuadratureRule& rule,
                           const IterObserver& observer = {});

/// Option 4: singular SPSD system over the node-based set B only; the only
/// option available in 3D.
SchemeResult solve_option4(std::shared_ptr<const PeriodicMesh> mesh,
                           const ScalarField& f, const SolverConfig& cfg,
                           const QuadratureRule& rule,
                           const IterObserver& observer = {});

SchemeResult solve_option(int option, std::shared_ptr<const PeriodicMesh> mesh,
                          const ScalarField& f, const SolverConfig& cfg,
                          const QuadratureRule& rule);

/// (L2, broken H1) distance between two solutions on the same mesh,
/// integrated cellwise.
std::pair<double, double> compare_solutions(const DiscreteSolution& a,
                                            const DiscreteSolution& b);

/// Quadrature mean of f over the mesh; the solvers subtract it when it
/// exceeds 1e-12 times the quadrature L2 norm of f.
double quadrature_mean(const PeriodicMesh& mesh, const ScalarField& f,
                       const QuadratureRule& rule);

/// Legacy ASCII grid with per-cell linear coefficients as cell data.
void write_solution_grid(std::ostream& os, const DiscreteSolution& u,
                         const std::string& title);
/// CSV of (face id, midpoint value).
void write_face_values_csv(std::ostream& os, const DiscreteSolution& u);

}  // namespace p1nc

#endif
