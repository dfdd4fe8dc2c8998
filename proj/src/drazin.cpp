#include "p1nc/drazin.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace p1nc {

namespace {

index_t rank_with_tol(const Eigen::VectorXd& sv, double rtol) {
  if (sv.size() == 0) return 0;
  const double smax = sv(0);
  if (smax == 0.0) return 0;
  index_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rtol * smax) ++r;
  return r;
}

}  // namespace

index_t stable_rank(const Eigen::MatrixXd& A, double rtol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const Eigen::VectorXd sv = svd.singularValues();
  const index_t r = rank_with_tol(sv, rtol);
  if (rank_with_tol(sv, rtol * 10.0) != r || rank_with_tol(sv, rtol / 10.0) != r)
    throw InternalError("stable_rank: rank not stable under tolerance scaling");
  return r;
}

Eigen::MatrixXd symmetric_nullspace(const Eigen::MatrixXd& A, double rtol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const Eigen::VectorXd ev = es.eigenvalues().cwiseAbs();
  const double emax = ev.maxCoeff();
  std::vector<Eigen::Index> null_idx;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (emax == 0.0 || ev(i) <= rtol * emax) null_idx.push_back(i);
  Eigen::MatrixXd N(A.rows(), static_cast<Eigen::Index>(null_idx.size()));
  for (std::size_t c = 0; c < null_idx.size(); ++c)
    N.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(null_idx[c]);
  return N;
}

int matrix_index(const Eigen::MatrixXd& A, double rank_rtol) {
  if (A.rows() != A.cols()) throw InvalidSpecError("matrix_index: square matrices only");
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
  index_t prev_rank = n;
  for (int k = 1; k <= n + 1; ++k) {
    P = P * A;
    // normalize to keep singular values of powers in range
    const double scale = P.cwiseAbs().maxCoeff();
    if (scale > 0.0 && std::isfinite(scale)) P /= scale;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(P);
    const index_t r = rank_with_tol(svd.singularValues(), rank_rtol);
    if (r == prev_rank) return k - 1;
    prev_rank = r;
    if (r == 0) return k;  // nilpotent: Im A^k = {0} stabilizes here
  }
  throw InternalError("matrix_index: rank chain did not stabilize");
}

Eigen::MatrixXd drazin_inverse(const Eigen::MatrixXd& A, double rank_rtol) {
  if (A.rows() != A.cols()) throw InvalidSpecError("drazin_inverse: square matrices only");
  const Eigen::Index n = A.rows();
  const int k = matrix_index(A, rank_rtol);
  if (k == 0) return A.partialPivLu().solve(Eigen::MatrixXd::Identity(n, n));

  Eigen::MatrixXd Ak = Eigen::MatrixXd::Identity(n, n);
  for (int p = 0; p < k; ++p) {
    Ak = Ak * A;
    const double scale = Ak.cwiseAbs().maxCoeff();
    if (scale > 0.0 && std::isfinite(scale)) Ak /= scale;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ak, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const index_t r = rank_with_tol(svd.singularValues(), rank_rtol);
  if (r == 0) return Eigen::MatrixXd::Zero(n, n);  // nilpotent

  // Im A^k = span U1 (A-invariant), ker A^k = span V2 (A-invariant);
  // together they decompose R^n at the index.
  const Eigen::MatrixXd U1 = svd.matrixU().leftCols(r);
  const Eigen::MatrixXd V2 = svd.matrixV().rightCols(n - r);
  Eigen::MatrixXd P(n, n);
  P << U1, V2;
  const Eigen::MatrixXd C = U1.transpose() * A * U1;  // A restricted to Im A^k
  const Eigen::MatrixXd Pinv = P.partialPivLu().solve(Eigen::MatrixXd::Identity(n, n));
  return U1 * C.partialPivLu().solve(Pinv.topRows(r));
}

KrylovCheck krylov_solution_check(const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b,
                                  double consistency_rtol) {
  KrylovCheck out;
  const double bnorm = b.norm();
  const Eigen::MatrixXd N = symmetric_nullspace(A);
  const double kernel_part = (N.cols() > 0) ? (N.transpose() * b).norm() : 0.0;
  if (bnorm > 0.0 && kernel_part > consistency_rtol * bnorm) {
    out.verdict = KrylovVerdict::no_krylov_solution;
    return out;
  }
  out.verdict = KrylovVerdict::unique_krylov_solution;
  out.drazin_solution = drazin_inverse(A) * b;

  const index_t n = static_cast<index_t>(b.size());
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  std::vector<double> bv(b.data(), b.data() + n);
  LinearOperator op = [&A](std::span<const double> in, std::span<double> outv) {
    Eigen::Map<const Eigen::VectorXd> vin(in.data(), static_cast<Eigen::Index>(in.size()));
    Eigen::Map<Eigen::VectorXd> vout(outv.data(), static_cast<Eigen::Index>(outv.size()));
    vout = A * vin;
  };
  SolverConfig cfg;
  cfg.tol = 1e-13;
  cfg.max_iter = 100 * n;
  out.cg_report = cg(op, bv, x, cfg);
  out.cg_solution = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(n));
  out.difference = (out.cg_solution - out.drazin_solution).norm() /
                   std::max(1.0, out.drazin_solution.norm());
  return out;
}

}  // namespace p1nc
