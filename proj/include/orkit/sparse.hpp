#pragma once

#include <cstdint>
#include <vector>

namespace orkit {

// Compressed sparse column storage. Indices are 0-based; row indices are
// strictly increasing within each column.
struct CscMatrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<std::int64_t> col_ptr{0};
  std::vector<std::int64_t> row_idx;
  std::vector<double> values;

  std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }

  // Throws DimensionMismatch when the storage arrays are inconsistent.
  void validate() const;

  bool operator==(const CscMatrix&) const = default;
};

// Compressed sparse row storage, the mirror image of CscMatrix.
struct CsrMatrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<std::int64_t> row_ptr{0};
  std::vector<std::int64_t> col_idx;
  std::vector<double> values;

  std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }

  void validate() const;

  bool operator==(const CsrMatrix&) const = default;
};

// Sparse vector of logical length `size`. Indices are unique but not
// necessarily sorted.
struct SparseVector {
  std::int64_t size = 0;
  std::vector<std::int64_t> indices;
  std::vector<double> values;

  std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }

  void validate() const;

  void push_back(std::int64_t index, double value) {
    indices.push_back(index);
    values.push_back(value);
  }

  std::vector<double> to_dense() const;

  // Reorders entries by increasing index. Kernels never call this; it exists
  // for comparisons in tests and reports.
  void sort_indices();

  bool operator==(const SparseVector&) const = default;
};

SparseVector sparse_from_dense(const std::vector<double>& dense);

CsrMatrix csc_to_csr(const CscMatrix& a);
CscMatrix csr_to_csc(const CsrMatrix& a);

// Column-major dense copy, entry (i, j) at [i + j * rows].
std::vector<double> to_dense(const CscMatrix& a);

}  // namespace orkit
