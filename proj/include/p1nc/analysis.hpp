#ifndef P1NC_ANALYSIS_HPP
#define P1NC_ANALYSIS_HPP

#include <array>
#include <vector>

#include "p1nc/problems.hpp"
#include "p1nc/schemes.hpp"

namespace p1nc {

struct ErrorPair {
  double l2 = 0.0;
  double h1 = 0.0;  // broken H1 seminorm of the gradient error
};

/// Cellwise quadrature of |u - u_h|^2 and |grad u - grad u_h|^2 against the
/// problem's exact fields.
ErrorPair error_norms(const ManufacturedProblem& problem,
                      const DiscreteSolution& solution, int quad_order = 3);

struct ConvergenceRow {
  index_t n = 0;
  double h = 0.0;
  double h1 = 0.0, h1_order = 0.0;
  double l2 = 0.0, l2_order = 0.0;
  index_t iterations = 0;
  bool converged = false;
};

struct ConvergenceTable {
  std::string example;
  int option = 4;
  std::vector<ConvergenceRow> rows;  // orders between consecutive rows
};

/// Runs the scheme on the unit box at each n and tabulates errors and
/// observed orders log2(e(h)/e(h/2)).
ConvergenceTable convergence_study(const ManufacturedProblem& problem,
                                   int option,
                                   const std::vector<index_t>& n_list,
                                   const SolverConfig& cfg,
                                   int quad_order = 3);

struct RankDeficiencyEntry {
  index_t nx = 0, ny = 0, nz = 0;
  index_t predicted = 0;
  index_t oracle = 0;
};

/// Stiffness-kernel dimension of the periodic 3D systems: closed-form
/// prediction next to the dense-rank ground truth.
std::vector<RankDeficiencyEntry> rank_deficiency_study(
    const std::vector<std::array<index_t, 3>>& triples);

struct EquivalenceRow {
  index_t n = 0;
  double h = 0.0;
  double max_pairwise_l2 = 0.0;  // among options 1-3
  double max_pairwise_h1 = 0.0;
  double gap_l2 = 0.0;  // option 3 vs option 4
  double gap_h1 = 0.0;
  double scale_l2 = 0.0;  // |u_h|_0 of the option-3 solution
  std::array<index_t, 4> iterations{0, 0, 0, 0};
};

struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;
  double slope_l2 = 0.0;  // log-log slopes of the option 3-4 gap vs h
  double slope_h1 = 0.0;
};

/// Solves with all four options per mesh size; options 1-3 must agree up to
/// solver tolerance while the option-4 gap shrinks at second (L2) and first
/// (H1) order.
EquivalenceReport scheme_equivalence_study(const ManufacturedProblem& problem,
                                           const std::vector<index_t>& n_list,
                                           const SolverConfig& cfg,
                                           int quad_order = 3);

/// L2 norm of a discrete solution (quadrature).
double solution_l2_norm(const DiscreteSolution& u);

}  // namespace p1nc

#endif
