#include "orkit/sparse.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "orkit/errors.hpp"

namespace orkit {
namespace {

void validate_compressed(std::int64_t outer, std::int64_t inner,
                         const std::vector<std::int64_t>& ptr,
                         const std::vector<std::int64_t>& idx,
                         const std::vector<double>& values, const char* what) {
  const std::string name(what);
  if (outer < 0 || inner < 0) {
    throw DimensionMismatch(name + ": negative dimension");
  }
  if (static_cast<std::int64_t>(ptr.size()) != outer + 1) {
    throw DimensionMismatch(name + ": pointer array has wrong length");
  }
  if (ptr.front() != 0 || ptr.back() != static_cast<std::int64_t>(idx.size()) ||
      idx.size() != values.size()) {
    throw DimensionMismatch(name + ": pointer/index/value arrays disagree");
  }
  for (std::int64_t k = 0; k < outer; ++k) {
    if (ptr[k] > ptr[k + 1]) {
      throw DimensionMismatch(name + ": pointers must be nondecreasing");
    }
    for (std::int64_t p = ptr[k]; p < ptr[k + 1]; ++p) {
      if (idx[p] < 0 || idx[p] >= inner) {
        throw DimensionMismatch(name + ": index out of range");
      }
      if (p > ptr[k] && idx[p] <= idx[p - 1]) {
        throw DimensionMismatch(name + ": indices must strictly increase");
      }
    }
  }
}

// Counting-sort transpose shared by both conversions. Since the outer loop
// visits sources in order, each output segment comes out sorted.
void transpose_storage(std::int64_t outer, std::int64_t inner,
                       const std::vector<std::int64_t>& ptr,
                       const std::vector<std::int64_t>& idx,
                       const std::vector<double>& values,
                       std::vector<std::int64_t>& out_ptr,
                       std::vector<std::int64_t>& out_idx,
                       std::vector<double>& out_values) {
  out_ptr.assign(inner + 1, 0);
  for (std::int64_t i : idx) ++out_ptr[i + 1];
  std::partial_sum(out_ptr.begin(), out_ptr.end(), out_ptr.begin());
  out_idx.resize(idx.size());
  out_values.resize(values.size());
  std::vector<std::int64_t> next(out_ptr.begin(), out_ptr.end() - 1);
  for (std::int64_t k = 0; k < outer; ++k) {
    for (std::int64_t p = ptr[k]; p < ptr[k + 1]; ++p) {
      const std::int64_t dest = next[idx[p]]++;
      out_idx[dest] = k;
      out_values[dest] = values[p];
    }
  }
}

}  // namespace

void CscMatrix::validate() const {
  validate_compressed(cols, rows, col_ptr, row_idx, values, "CSC matrix");
}

void CsrMatrix::validate() const {
  validate_compressed(rows, cols, row_ptr, col_idx, values, "CSR matrix");
}

void SparseVector::validate() const {
  if (indices.size() != values.size()) {
    throw DimensionMismatch("sparse vector: index/value lengths differ");
  }
  std::vector<char> seen(static_cast<std::size_t>(std::max<std::int64_t>(size, 0)), 0);
  for (std::int64_t i : indices) {
    if (i < 0 || i >= size) {
      throw DimensionMismatch("sparse vector: index out of range");
    }
    if (seen[i]) throw DimensionMismatch("sparse vector: duplicate index");
    seen[i] = 1;
  }
}

std::vector<double> SparseVector::to_dense() const {
  std::vector<double> dense(size, 0.0);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    dense[indices[k]] = values[k];
  }
  return dense;
}

void SparseVector::sort_indices() {
  std::vector<std::size_t> order(indices.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return indices[a] < indices[b]; });
  std::vector<std::int64_t> idx(order.size());
  std::vector<double> val(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    idx[k] = indices[order[k]];
    val[k] = values[order[k]];
  }
  indices = std::move(idx);
  values = std::move(val);
}

SparseVector sparse_from_dense(const std::vector<double>& dense) {
  SparseVector v;
  v.size = static_cast<std::int64_t>(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) v.push_back(static_cast<std::int64_t>(i), dense[i]);
  }
  return v;
}

CsrMatrix csc_to_csr(const CscMatrix& a) {
  CsrMatrix out;
  out.rows = a.rows;
  out.cols = a.cols;
  transpose_storage(a.cols, a.rows, a.col_ptr, a.row_idx, a.values, out.row_ptr,
                    out.col_idx, out.values);
  return out;
}

CscMatrix csr_to_csc(const CsrMatrix& a) {
  CscMatrix out;
  out.rows = a.rows;
  out.cols = a.cols;
  transpose_storage(a.rows, a.cols, a.row_ptr, a.col_idx, a.values, out.col_ptr,
                    out.row_idx, out.values);
  return out;
}

std::vector<double> to_dense(const CscMatrix& a) {
  std::vector<double> dense(static_cast<std::size_t>(a.rows * a.cols), 0.0);
  for (std::int64_t j = 0; j < a.cols; ++j) {
    for (std::int64_t p = a.col_ptr[j]; p < a.col_ptr[j + 1]; ++p) {
      dense[a.row_idx[p] + j * a.rows] += a.values[p];
    }
  }
  return dense;
}

}  // namespace orkit
