#include "ma/sparse.hpp"

#include "ma/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace ma {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      offsets_(std::move(row_offsets)),
      cols_idx_(std::move(col_indices)),
      values_(std::move(values)) {
  if (offsets_.size() != rows_ + 1 || offsets_.front() != 0 || offsets_.back() != values_.size() ||
      cols_idx_.size() != values_.size()) {
    throw DataError("sparse matrix: inconsistent CSR arrays");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    if (offsets_[r] > offsets_[r + 1]) throw DataError("sparse matrix: row offsets decrease");
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
      if (cols_idx_[k] >= cols_) throw DataError("sparse matrix: column index out of range");
      if (k > offsets_[r] && cols_idx_[k] <= cols_idx_[k - 1]) {
        throw DataError("sparse matrix: columns not sorted and unique in row " + std::to_string(r));
      }
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  RowAssembler assembler(rows, cols);
  std::size_t row = 0;
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) throw DataError("sparse matrix: triplet out of range");
    while (row < t.row) {
      assembler.finish_row();
      ++row;
    }
    assembler.add(t.col, t.value);
  }
  while (row < rows) {
    assembler.finish_row();
    ++row;
  }
  return std::move(assembler).build();
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> offsets(n + 1), cols(n);
  for (std::size_t i = 0; i <= n; ++i) offsets[i] = i;
  for (std::size_t i = 0; i < n; ++i) cols[i] = i;
  return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
}

double SparseMatrix::at(std::size_t r, std::size_t c) const noexcept {
  const auto first = cols_idx_.begin() + static_cast<std::ptrdiff_t>(offsets_[r]);
  const auto last = cols_idx_.begin() + static_cast<std::ptrdiff_t>(offsets_[r + 1]);
  const auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_idx_.begin())];
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw DataError("sparse matrix: vector length mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) s += values_[k] * x[cols_idx_[k]];
    y[r] = s;
  }
  return y;
}

void SparseMatrix::write_coordinate(std::ostream& os) const {
  char buf[64];
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", r, cols_idx_[k], values_[k]);
      os << buf;
    }
  }
}

RowAssembler::RowAssembler(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

void RowAssembler::finish_row() {
  std::stable_sort(pending_.begin(), pending_.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 0; k < pending_.size();) {
    const std::size_t col = pending_[k].first;
    double sum = 0.0;
    for (; k < pending_.size() && pending_[k].first == col; ++k) sum += pending_[k].second;
    col_indices_.push_back(col);
    values_.push_back(sum);
  }
  pending_.clear();
  offsets_.push_back(values_.size());
}

SparseMatrix RowAssembler::build() && {
  if (!pending_.empty()) finish_row();
  while (offsets_.size() < rows_ + 1) offsets_.push_back(values_.size());
  return SparseMatrix(rows_, cols_, std::move(offsets_), std::move(col_indices_), std::move(values_));
}

SparseMatrix SparseMatrix::shifted(double sigma) const {
  if (rows_ != cols_) throw DataError("shifted: matrix is not square");
  RowAssembler row(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) row.add(cols_idx_[k], values_[k]);
    row.add(r, sigma);
    row.finish_row();
  }
  return std::move(row).build();
}

}  // namespace ma
