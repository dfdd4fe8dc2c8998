#ifndef P1NC_KERNELS_HPP
#define P1NC_KERNELS_HPP

#include <cstdint>
#include <span>

// Data-parallel primitives used by assembly, solvers, and norm evaluation.
//
// The parallel variants are deterministic: reductions are computed over
// fixed-size chunks whose partial sums are combined serially in index order,
// so the result does not depend on the number of threads. The *_serial
// variants are the plain reference loops kept for testing and benchmarking.

namespace p1nc::kernels {

inline constexpr std::int64_t reduction_chunk = 4096;

double sum(std::span<const double> x);
double sum_serial(std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double dot_serial(std::span<const double> a, std::span<const double> b);

double norm2(std::span<const double> x);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// y = x + beta * y
void xpby(std::span<const double> x, double beta, std::span<double> y);
void scale(double alpha, std::span<double> x);
void fill(std::span<double> x, double value);
void copy(std::span<const double> src, std::span<double> dst);

/// y = A x for CSR storage; rows are processed independently.
void csr_matvec(std::int64_t rows, const std::int64_t* row_ptr,
                const std::int64_t* col, const double* val, const double* x,
                double* y);
void csr_matvec_serial(std::int64_t rows, const std::int64_t* row_ptr,
                       const std::int64_t* col, const double* val,
                       const double* x, double* y);

int max_threads();

}  // namespace p1nc::kernels

#endif
