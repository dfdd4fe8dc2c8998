#include "p1nc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace p1nc::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

double sum_serial(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

double dot_serial(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

namespace {

// Chunked reduction: partials in parallel, combined serially in chunk order.
template <class ChunkOp>
double chunked_reduce(std::int64_t n, ChunkOp&& op) {
  if (n == 0) return 0.0;
  const std::int64_t nchunks = (n + reduction_chunk - 1) / reduction_chunk;
  if (nchunks == 1) return op(0, n);
  std::vector<double> partial(static_cast<std::size_t>(nchunks));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t c = 0; c < nchunks; ++c) {
    const std::int64_t lo = c * reduction_chunk;
    const std::int64_t hi = std::min(n, lo + reduction_chunk);
    partial[static_cast<std::size_t>(c)] = op(lo, hi);
  }
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

}  // namespace

double sum(std::span<const double> x) {
  return chunked_reduce(static_cast<std::int64_t>(x.size()),
                        [&](std::int64_t lo, std::int64_t hi) {
                          double s = 0.0;
                          for (std::int64_t i = lo; i < hi; ++i) s += x[i];
                          return s;
                        });
}

double dot(std::span<const double> a, std::span<const double> b) {
  return chunked_reduce(static_cast<std::int64_t>(a.size()),
                        [&](std::int64_t lo, std::int64_t hi) {
                          double s = 0.0;
                          for (std::int64_t i = lo; i < hi; ++i)
                            s += a[i] * b[i];
                          return s;
                        });
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void scale(double alpha, std::span<double> x) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < n; ++i) x[i] *= alpha;
}

void fill(std::span<double> x, double value) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < n; ++i) x[i] = value;
}

void copy(std::span<const double> src, std::span<double> dst) {
  const std::int64_t n = static_cast<std::int64_t>(src.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < n; ++i) dst[i] = src[i];
}

void csr_matvec_serial(std::int64_t rows, const std::int64_t* row_ptr,
                       const std::int64_t* col, const double* val,
                       const double* x, double* y) {
  for (std::int64_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::int64_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
      s += val[p] * x[col[p]];
    y[r] = s;
  }
}

void csr_matvec(std::int64_t rows, const std::int64_t* row_ptr,
                const std::int64_t* col, const double* val, const double* x,
                double* y) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::int64_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
      s += val[p] * x[col[p]];
    y[r] = s;
  }
}

}  // namespace p1nc::kernels
