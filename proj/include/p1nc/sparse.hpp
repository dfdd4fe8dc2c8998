#ifndef P1NC_SPARSE_HPP
#define P1NC_SPARSE_HPP

#include <iosfwd>
#include <span>
#include <vector>

#include "p1nc/core.hpp"

namespace p1nc {

/// Compressed sparse row matrix. Column ids are sorted and unique within
/// each row. Immutable by convention after assembly.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(index_t rows, index_t cols) : rows_(rows), cols_(cols) {
    row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
  }

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }
  index_t nnz() const { return static_cast<index_t>(col.size()); }

  std::vector<index_t> row_ptr;
  std::vector<index_t> col;
  std::vector<double> val;
  bool symmetric_hint = false;

  /// y = A x (deterministic row-parallel kernel).
  void matvec(std::span<const double> x, std::span<double> y) const;

  double entry(index_t r, index_t c) const;  // 0 if not stored

  /// Builds from (row, col, value) triplets; duplicate entries accumulate.
  static SparseMatrix from_triplets(
      index_t rows, index_t cols,
      std::vector<std::tuple<index_t, index_t, double>> triplets);

  /// Value-level symmetry check (relative to the largest entry).
  bool is_symmetric(double rtol = 1e-14) const;

  /// Keeps rows/columns with keep[i] != 0, renumbering densely.
  SparseMatrix minor(std::span<const std::uint8_t> keep_rows,
                     std::span<const std::uint8_t> keep_cols) const;

 private:
  index_t rows_ = 0, cols_ = 0;
};

/// Matrix Market coordinate text I/O ("matrix coordinate real
/// general|symmetric"). Writing always emits the general form.
void write_matrix_market(std::ostream& os, const SparseMatrix& m);
SparseMatrix read_matrix_market(std::istream& is);

}  // namespace p1nc

#endif
