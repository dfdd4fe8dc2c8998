#ifndef P1NC_PROBLEMS_HPP
#define P1NC_PROBLEMS_HPP

#include <string>

#include "p1nc/core.hpp"

namespace p1nc {

/// Manufactured periodic Poisson problem -laplace(u) = f on the unit box,
/// with hand-differentiated exact gradient and zero-mean u and f.
struct ManufacturedProblem {
  std::string name;
  int dim = 2;
  ScalarField u;
  VectorField grad_u;
  ScalarField f;
};

/// Tensor product of truncated Fourier square waves.
const ManufacturedProblem& example1();
/// Tensor product of a compactly supported bump profile (the additive
/// constant making the 1D profile zero-mean is computed once by adaptive
/// quadrature).
const ManufacturedProblem& example2();
/// 3D product of sines.
const ManufacturedProblem& example3();

const ManufacturedProblem& problem_by_name(const std::string& name);

}  // namespace p1nc

#endif
