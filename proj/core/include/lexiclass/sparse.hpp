#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace lexiclass {

struct SparseEntry {
  std::uint32_t index;
  double value;  // always nonzero for stored entries

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// One row of feature values. Entries are sorted by strictly increasing index,
/// all indices < dim, all stored values nonzero.
class SparseVector {
 public:
  SparseVector() = default;

  /// Validates and adopts the entries. Throws lexiclass::Error on duplicate or
  /// out-of-range indices, zero values, or non-increasing order.
  SparseVector(std::size_t dim, std::vector<SparseEntry> entries);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<SparseEntry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::size_t dim_ = 0;
  std::vector<SparseEntry> entries_;
};

/// Immutable CSR matrix of finite reals.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// All rows must have dim == cols.
  static SparseMatrix from_rows(std::size_t cols,
                                const std::vector<SparseVector>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return cells_.size(); }

  std::span<const SparseEntry> row(std::size_t i) const {
    return {cells_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  /// New matrix with the given rows, in the given order.
  SparseMatrix select_rows(std::span<const std::size_t> idx) const;

  /// New matrix with one extra column holding the given per-row values
  /// (zeros are not stored).
  SparseMatrix append_column(std::span<const double> values) const;

  /// True when every stored value is finite.
  bool all_finite() const;

  /// Triplet text format: header line "rows cols nnz", then one
  /// "row col value" line per entry in row-major order.
  void save(std::ostream& out) const;
  static SparseMatrix load(std::istream& in);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<SparseEntry> cells_;
};

}  // namespace lexiclass
