#include "p1nc/solvers.hpp"

#include <chrono>
#include <cmath>

#include "p1nc/kernels.hpp"

namespace p1nc {

namespace ker = kernels;

void SolverConfig::validate() const {
  if (!(tol > 0.0 && tol < 1.0)) throw InvalidSpecError("SolverConfig: tol must be in (0,1)");
  if (restart < 1) throw InvalidSpecError("SolverConfig: restart must be >= 1");
  if (max_iter < 0) throw InvalidSpecError("SolverConfig: max_iter must be >= 0");
}

namespace {

using clock_t_ = std::chrono::steady_clock;

double elapsed(clock_t_::time_point t0) {
  return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

}  // namespace

SolveReport cg(const LinearOperator& A, std::span<const double> b,
               std::span<double> x, const SolverConfig& cfg,
               const CgOptions& opts) {
  cfg.validate();
  const auto t0 = clock_t_::now();
  const index_t n = static_cast<index_t>(b.size());
  const index_t max_iter = cfg.max_iter > 0 ? cfg.max_iter : 10 * n;
  SolveReport rep;

  const double bnorm = ker::norm2(b);
  if (opts.kernel) {
    for (const auto& k : *opts.kernel) {
      const double knorm = ker::norm2(k);
      if (knorm == 0.0) continue;
      if (std::abs(ker::dot(b, k)) > opts.consistency_tol * bnorm * knorm)
        throw InconsistentRhsError("cg: right-hand side has a kernel component");
    }
  }
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.relative_residual = 0.0;
    rep.seconds = elapsed(t0);
    return rep;
  }

  std::vector<double> r(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n)),
      Ap(static_cast<std::size_t>(n));
  A(x, Ap);
  for (index_t i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] - Ap[static_cast<std::size_t>(i)];
  ker::copy(r, p);
  double rr = ker::dot(r, r);
  rep.relative_residual = std::sqrt(rr) / bnorm;
  if (rep.relative_residual <= cfg.tol) {
    rep.converged = true;
    rep.seconds = elapsed(t0);
    return rep;
  }

  for (index_t it = 1; it <= max_iter; ++it) {
    A(p, Ap);
    const double pAp = ker::dot(p, Ap);
    if (pAp <= 0.0) break;  // not SPSD along p; bail out with current iterate
    const double alpha = rr / pAp;
    ker::axpy(alpha, p, x);
    ker::axpy(-alpha, Ap, r);
    const double rr_new = ker::dot(r, r);
    rep.iterations = it;
    rep.relative_residual = std::sqrt(rr_new) / bnorm;
    if (opts.observer) opts.observer(it, x);
    if (rep.relative_residual <= cfg.tol) {
      rep.converged = true;
      break;
    }
    ker::xpby(r, rr_new / rr, p);
    rr = rr_new;
  }
  rep.seconds = elapsed(t0);
  return rep;
}

SolveReport gmres_restarted(const LinearOperator& A, std::span<const double> b,
                            std::span<double> x, const SolverConfig& cfg) {
  cfg.validate();
  const auto t0 = clock_t_::now();
  const index_t n = static_cast<index_t>(b.size());
  const index_t max_iter = cfg.max_iter > 0 ? cfg.max_iter : 10 * n;
  const int m = cfg.restart;
  SolveReport rep;

  const double bnorm = ker::norm2(b);
  if (bnorm == 0.0) {
    ker::fill(x, 0.0);
    rep.converged = true;
    rep.seconds = elapsed(t0);
    return rep;
  }

  std::vector<std::vector<double>> V(static_cast<std::size_t>(m) + 1,
                                     std::vector<double>(static_cast<std::size_t>(n)));
  // Hessenberg in column-major: H[j] holds column j (j+2 entries used)
  std::vector<std::vector<double>> H(static_cast<std::size_t>(m),
                                     std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  std::vector<double> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m)),
      g(static_cast<std::size_t>(m) + 1), y(static_cast<std::size_t>(m)),
      w(static_cast<std::size_t>(n));

  double res = 0.0;
  double prev_cycle_res = -1.0;
  int stalled = 0;

  while (rep.iterations < max_iter) {
    // r = b - A x
    A(x, w);
    for (index_t i = 0; i < n; ++i) V[0][static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(i)];
    const double beta = ker::norm2(V[0]);
    res = beta / bnorm;
    rep.relative_residual = res;
    if (res <= cfg.tol) {
      rep.converged = true;
      break;
    }
    if (prev_cycle_res >= 0.0 && res >= prev_cycle_res * (1.0 - 1e-12)) {
      if (++stalled >= 3) break;  // stagnation across full cycles
    } else {
      stalled = 0;
    }
    prev_cycle_res = res;

    ker::scale(1.0 / beta, V[0]);
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;

    int j = 0;
    for (; j < m && rep.iterations < max_iter; ++j) {
      ++rep.iterations;
      A(V[static_cast<std::size_t>(j)], w);
      // modified Gram-Schmidt
      for (int i = 0; i <= j; ++i) {
        const double hij = ker::dot(w, V[static_cast<std::size_t>(i)]);
        H[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = hij;
        ker::axpy(-hij, V[static_cast<std::size_t>(i)], w);
      }
      const double hnext = ker::norm2(w);
      H[static_cast<std::size_t>(j)][static_cast<std::size_t>(j) + 1] = hnext;
      if (hnext > 0.0) {
        ker::copy(w, V[static_cast<std::size_t>(j) + 1]);
        ker::scale(1.0 / hnext, V[static_cast<std::size_t>(j) + 1]);
      }
      // apply previous Givens rotations to column j
      for (int i = 0; i < j; ++i) {
        const double t1 = cs[static_cast<std::size_t>(i)] * H[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] +
                          sn[static_cast<std::size_t>(i)] * H[static_cast<std::size_t>(j)][static_cast<std::size_t>(i) + 1];
        const double t2 = -sn[static_cast<std::size_t>(i)] * H[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] +
                          cs[static_cast<std::size_t>(i)] * H[static_cast<std::size_t>(j)][static_cast<std::size_t>(i) + 1];
        H[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = t1;
        H[static_cast<std::size_t>(j)][static_cast<std::size_t>(i) + 1] = t2;
      }
      const double h0 = H[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
      const double h1 = H[static_cast<std::size_t>(j)][static_cast<std::size_t>(j) + 1];
      const double r = std::hypot(h0, h1);
      if (r == 0.0) {
        cs[static_cast<std::size_t>(j)] = 1.0;
        sn[static_cast<std::size_t>(j)] = 0.0;
      } else {
        cs[static_cast<std::size_t>(j)] = h0 / r;
        sn[static_cast<std::size_t>(j)] = h1 / r;
      }
      H[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = r;
      H[static_cast<std::size_t>(j)][static_cast<std::size_t>(j) + 1] = 0.0;
      const double gj = g[static_cast<std::size_t>(j)];
      g[static_cast<std::size_t>(j)] = cs[static_cast<std::size_t>(j)] * gj;
      g[static_cast<std::size_t>(j) + 1] = -sn[static_cast<std::size_t>(j)] * gj;
      res = std::abs(g[static_cast<std::size_t>(j) + 1]) / bnorm;
      rep.relative_residual = res;
      if (res <= cfg.tol || hnext == 0.0) {
        ++j;
        break;
      }
    }
    // back substitution: y = R^-1 g
    for (int i = j - 1; i >= 0; --i) {
      double s = g[static_cast<std::size_t>(i)];
      for (int l = i + 1; l < j; ++l)
        s -= H[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(l)];
      y[static_cast<std::size_t>(i)] = s / H[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < j; ++i)
      ker::axpy(y[static_cast<std::size_t>(i)], V[static_cast<std::size_t>(i)], x);
    if (res <= cfg.tol) {
      rep.converged = true;
      // recompute the true residual for the report
      A(x, w);
      for (index_t i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] -= b[static_cast<std::size_t>(i)];
      rep.relative_residual = ker::norm2(w) / bnorm;
      rep.converged = rep.relative_residual <= cfg.tol * 10.0;
      break;
    }
  }
  rep.seconds = elapsed(t0);
  return rep;
}

}  // namespace p1nc
