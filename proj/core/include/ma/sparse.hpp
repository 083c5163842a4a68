#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace ma {

/// Square or rectangular matrix in compressed sparse row form. Column
/// indices are sorted and unique within each row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Takes ownership of CSR arrays; throws DataError if they are inconsistent.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<double> values);

  struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
  };
  /// Duplicate (row, col) entries are summed.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);
  static SparseMatrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t nnz() const noexcept { return values_.size(); }

  [[nodiscard]] std::span<const std::size_t> row_offsets() const noexcept { return offsets_; }
  [[nodiscard]] std::span<const std::size_t> col_indices() const noexcept { return cols_idx_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  /// Entry (r, c), zero if not stored.
  [[nodiscard]] double at(std::size_t r, std::size_t c) const noexcept;

  [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

  /// A + sigma I for a square matrix; inserts missing diagonal entries.
  [[nodiscard]] SparseMatrix shifted(double sigma) const;

  /// Coordinate text dump: one `row col value` line per stored entry.
  void write_coordinate(std::ostream& os) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> cols_idx_;
  std::vector<double> values_;
};

/// Assembles a CSR matrix one row at a time, in row order.
class RowAssembler {
 public:
  RowAssembler(std::size_t rows, std::size_t cols);

  /// Adds value to (current row, col); repeated columns accumulate.
  void add(std::size_t col, double value) { pending_.emplace_back(col, value); }
  /// Sorts and merges the pending entries and starts the next row.
  void finish_row();
  [[nodiscard]] SparseMatrix build() &&;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::pair<std::size_t, double>> pending_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

}  // namespace ma
