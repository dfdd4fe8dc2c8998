#ifndef P1NC_SOLVERS_HPP
#define P1NC_SOLVERS_HPP

#include <functional>
#include <span>
#include <vector>

#include "p1nc/core.hpp"

namespace p1nc {

struct SolverConfig {
  double tol = 1e-10;     // relative residual target
  index_t max_iter = 0;   // 0: defaults to 10 n
  int restart = 20;       // GMRES only
  void validate() const;
};

struct SolveReport {
  index_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  double seconds = 0.0;
};

/// y = A x; the only operation the solvers require of a matrix.
using LinearOperator =
    std::function<void(std::span<const double>, std::span<double>)>;

/// Called after each update with the current iterate.
using IterObserver = std::function<void(index_t iter, std::span<const double> x)>;

struct CgOptions {
  /// When set, b is checked for consistency against these kernel vectors
  /// of A; a component above consistency_tol * |b| raises
  /// InconsistentRhsError.
  const std::vector<std::vector<double>>* kernel = nullptr;
  double consistency_tol = 1e-8;
  IterObserver observer;
};

/// Conjugate gradients for symmetric positive semi-definite systems.
/// For consistent b the Krylov iterates stay in x0 + Im A, so kernel
/// components of the initial guess are preserved.
SolveReport cg(const LinearOperator& A, std::span<const double> b,
               std::span<double> x, const SolverConfig& cfg,
               const CgOptions& opts = {});

/// Restarted GMRES for general square systems.
SolveReport gmres_restarted(const LinearOperator& A, std::span<const double> b,
                            std::span<double> x, const SolverConfig& cfg);

}  // namespace p1nc

#endif
