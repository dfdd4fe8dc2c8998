#ifndef P1NC_DRAZIN_HPP
#define P1NC_DRAZIN_HPP

#include <Eigen/Dense>

#include "p1nc/core.hpp"
#include "p1nc/solvers.hpp"

namespace p1nc {

/// Index of a square matrix: the smallest k >= 0 with
/// rank(A^k) == rank(A^(k+1)). Nonsingular matrices have index 0.
int matrix_index(const Eigen::MatrixXd& A, double rank_rtol = 1e-11);

/// Drazin inverse via the core-nilpotent splitting at k = index(A):
/// A restricted to Im A^k is inverted, ker A^k maps to zero.
Eigen::MatrixXd drazin_inverse(const Eigen::MatrixXd& A,
                               double rank_rtol = 1e-11);

enum class KrylovVerdict { unique_krylov_solution, no_krylov_solution };

struct KrylovCheck {
  KrylovVerdict verdict = KrylovVerdict::no_krylov_solution;
  Eigen::VectorXd drazin_solution;
  Eigen::VectorXd cg_solution;
  double difference = 0.0;  // |x_cg - A^D b| / max(1, |A^D b|)
  SolveReport cg_report;
};

/// For SPSD A: if b lies in Im A, CG from zero reproduces the unique Krylov
/// solution A^D b; otherwise no Krylov solution exists and the verdict says
/// so (CG is not run).
KrylovCheck krylov_solution_check(const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b,
                                  double consistency_rtol = 1e-8);

/// Rank with singular values below rtol * sigma_max counted as zero.
/// Throws InternalError if the count is not stable under rtol*10 and
/// rtol/10 (guards integer dimension claims).
index_t stable_rank(const Eigen::MatrixXd& A, double rtol = 1e-9);

/// Orthonormal basis of the (numerical) null space of a symmetric matrix.
Eigen::MatrixXd symmetric_nullspace(const Eigen::MatrixXd& A,
                                    double rtol = 1e-9);

}  // namespace p1nc

#endif
