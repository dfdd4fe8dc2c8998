#include "p1nc/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include "p1nc/kernels.hpp"

namespace p1nc {

void SparseMatrix::matvec(std::span<const double> x, std::span<double> y) const {
  kernels::csr_matvec(rows_, row_ptr.data(), col.data(), val.data(), x.data(),
                      y.data());
}

double SparseMatrix::entry(index_t r, index_t c) const {
  for (index_t p = row_ptr[static_cast<std::size_t>(r)];
       p < row_ptr[static_cast<std::size_t>(r) + 1]; ++p)
    if (col[static_cast<std::size_t>(p)] == c) return val[static_cast<std::size_t>(p)];
  return 0.0;
}

SparseMatrix SparseMatrix::from_triplets(
    index_t rows, index_t cols,
    std::vector<std::tuple<index_t, index_t, double>> t) {
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b));
  });
  SparseMatrix m(rows, cols);
  m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
  std::size_t i = 0;
  while (i < t.size()) {
    const index_t r = std::get<0>(t[i]);
    const index_t c = std::get<1>(t[i]);
    double v = 0.0;
    while (i < t.size() && std::get<0>(t[i]) == r && std::get<1>(t[i]) == c)
      v += std::get<2>(t[i++]);
    m.col.push_back(c);
    m.val.push_back(v);
    ++m.row_ptr[static_cast<std::size_t>(r) + 1];
  }
  for (index_t r = 0; r < rows; ++r)
    m.row_ptr[static_cast<std::size_t>(r) + 1] += m.row_ptr[static_cast<std::size_t>(r)];
  return m;
}

bool SparseMatrix::is_symmetric(double rtol) const {
  if (rows_ != cols_) return false;
  double scale = 0.0;
  for (double v : val) scale = std::max(scale, std::abs(v));
  for (index_t r = 0; r < rows_; ++r)
    for (index_t p = row_ptr[static_cast<std::size_t>(r)];
         p < row_ptr[static_cast<std::size_t>(r) + 1]; ++p) {
      const index_t c = col[static_cast<std::size_t>(p)];
      if (std::abs(val[static_cast<std::size_t>(p)] - entry(c, r)) > rtol * std::max(1.0, scale))
        return false;
    }
  return true;
}

SparseMatrix SparseMatrix::minor(std::span<const std::uint8_t> keep_rows,
                                 std::span<const std::uint8_t> keep_cols) const {
  std::vector<index_t> rmap(static_cast<std::size_t>(rows_), -1);
  std::vector<index_t> cmap(static_cast<std::size_t>(cols_), -1);
  index_t nr = 0, nc = 0;
  for (index_t r = 0; r < rows_; ++r)
    if (keep_rows[static_cast<std::size_t>(r)]) rmap[static_cast<std::size_t>(r)] = nr++;
  for (index_t c = 0; c < cols_; ++c)
    if (keep_cols[static_cast<std::size_t>(c)]) cmap[static_cast<std::size_t>(c)] = nc++;
  SparseMatrix m(nr, nc);
  for (index_t r = 0; r < rows_; ++r) {
    if (rmap[static_cast<std::size_t>(r)] < 0) continue;
    for (index_t p = row_ptr[static_cast<std::size_t>(r)];
         p < row_ptr[static_cast<std::size_t>(r) + 1]; ++p) {
      const index_t c = col[static_cast<std::size_t>(p)];
      if (cmap[static_cast<std::size_t>(c)] < 0) continue;
      m.col.push_back(cmap[static_cast<std::size_t>(c)]);
      m.val.push_back(val[static_cast<std::size_t>(p)]);
      ++m.row_ptr[static_cast<std::size_t>(rmap[static_cast<std::size_t>(r)]) + 1];
    }
  }
  for (index_t r = 0; r < nr; ++r)
    m.row_ptr[static_cast<std::size_t>(r) + 1] += m.row_ptr[static_cast<std::size_t>(r)];
  return m;
}

void write_matrix_market(std::ostream& os, const SparseMatrix& m) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.rows() << " " << m.cols() << " " << m.nnz() << "\n";
  char buf[64];
  for (index_t r = 0; r < m.rows(); ++r)
    for (index_t p = m.row_ptr[static_cast<std::size_t>(r)];
         p < m.row_ptr[static_cast<std::size_t>(r) + 1]; ++p) {
      std::snprintf(buf, sizeof buf, "%.17g", m.val[static_cast<std::size_t>(p)]);
      os << r + 1 << " " << m.col[static_cast<std::size_t>(p)] + 1 << " " << buf << "\n";
    }
}

SparseMatrix read_matrix_market(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw InvalidSpecError("matrix market: missing header");
  std::istringstream hdr(line);
  std::string tag, object, format, field, symmetry;
  hdr >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "coordinate" || field != "real")
    throw InvalidSpecError("matrix market: unsupported header: " + line);
  const bool symmetric = (symmetry == "symmetric");
  if (!symmetric && symmetry != "general")
    throw InvalidSpecError("matrix market: unsupported symmetry: " + symmetry);
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream dims(line);
  index_t rows = 0, cols = 0, nnz = 0;
  dims >> rows >> cols >> nnz;
  if (rows <= 0 || cols <= 0 || nnz < 0)
    throw InvalidSpecError("matrix market: bad size line");
  std::vector<std::tuple<index_t, index_t, double>> t;
  t.reserve(static_cast<std::size_t>(nnz));
  for (index_t e = 0; e < nnz; ++e) {
    index_t r, c;
    double v;
    if (!(is >> r >> c >> v)) throw InvalidSpecError("matrix market: truncated data");
    t.emplace_back(r - 1, c - 1, v);
    if (symmetric && r != c) t.emplace_back(c - 1, r - 1, v);
  }
  SparseMatrix m = SparseMatrix::from_triplets(rows, cols, std::move(t));
  m.symmetric_hint = symmetric;
  return m;
}

}  // namespace p1nc
