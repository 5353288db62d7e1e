#include "lexiclass/sparse.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "lexiclass/errors.hpp"

namespace lexiclass {

SparseVector::SparseVector(std::size_t dim, std::vector<SparseEntry> entries)
    : dim_(dim), entries_(std::move(entries)) {
  std::uint32_t prev = 0;
  bool first = true;
  for (const SparseEntry& e : entries_) {
    if (e.index >= dim_) {
      throw Error("sparse entry index " + std::to_string(e.index) +
                  " out of range for dimension " + std::to_string(dim_));
    }
    if (!first && e.index <= prev) {
      throw Error("sparse entries must have strictly increasing indices");
    }
    if (e.value == 0.0) {
      throw Error("sparse entries must not store zero values");
    }
    prev = e.index;
    first = false;
  }
}

SparseMatrix SparseMatrix::from_rows(std::size_t cols,
                                     const std::vector<SparseVector>& rows) {
  SparseMatrix m;
  m.rows_ = rows.size();
  m.cols_ = cols;
  m.row_ptr_.reserve(rows.size() + 1);
  for (const SparseVector& r : rows) {
    if (r.dim() != cols) {
      throw Error("row dimension " + std::to_string(r.dim()) +
                  " does not match matrix column count " +
                  std::to_string(cols));
    }
    m.cells_.insert(m.cells_.end(), r.entries().begin(), r.entries().end());
    m.row_ptr_.push_back(m.cells_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::select_rows(std::span<const std::size_t> idx) const {
  SparseMatrix m;
  m.rows_ = idx.size();
  m.cols_ = cols_;
  m.row_ptr_.reserve(idx.size() + 1);
  for (std::size_t i : idx) {
    if (i >= rows_) throw Error("row index out of range in select_rows");
    auto r = row(i);
    m.cells_.insert(m.cells_.end(), r.begin(), r.end());
    m.row_ptr_.push_back(m.cells_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::append_column(std::span<const double> values) const {
  if (values.size() != rows_) {
    throw Error("append_column: value count " + std::to_string(values.size()) +
                " does not match row count " + std::to_string(rows_));
  }
  SparseMatrix m;
  m.rows_ = rows_;
  m.cols_ = cols_ + 1;
  m.row_ptr_.reserve(rows_ + 1);
  const auto new_col = static_cast<std::uint32_t>(cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    auto r = row(i);
    m.cells_.insert(m.cells_.end(), r.begin(), r.end());
    if (values[i] != 0.0) m.cells_.push_back({new_col, values[i]});
    m.row_ptr_.push_back(m.cells_.size());
  }
  return m;
}

bool SparseMatrix::all_finite() const {
  for (const SparseEntry& e : cells_) {
    if (!std::isfinite(e.value)) return false;
  }
  return true;
}

void SparseMatrix::save(std::ostream& out) const {
  out << rows_ << ' ' << cols_ << ' ' << cells_.size() << '\n';
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (const SparseEntry& e : row(i)) {
      line.str("");
      line << i << ' ' << e.index << ' ' << e.value << '\n';
      out << line.str();
    }
  }
}

SparseMatrix SparseMatrix::load(std::istream& in) {
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(in >> rows >> cols >> nnz)) {
    throw Error("sparse matrix load: bad header");
  }
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.cells_.reserve(nnz);
  m.row_ptr_.assign(1, 0);
  std::size_t prev_row = 0;
  std::uint32_t prev_col = 0;
  bool first = true;
  for (std::size_t k = 0; k < nnz; ++k) {
    std::size_t r = 0;
    std::uint32_t c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v)) throw Error("sparse matrix load: truncated data");
    if (r >= rows || c >= cols) {
      throw Error("sparse matrix load: entry out of range");
    }
    if (!first && (r < prev_row || (r == prev_row && c <= prev_col))) {
      throw Error("sparse matrix load: entries must be in row-major order");
    }
    while (m.row_ptr_.size() <= r) m.row_ptr_.push_back(m.cells_.size());
    m.cells_.push_back({c, v});
    prev_row = r;
    prev_col = c;
    first = false;
  }
  while (m.row_ptr_.size() <= rows) m.row_ptr_.push_back(m.cells_.size());
  return m;
}

}  // namespace lexiclass
