#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "orkit/kernels.hpp"
#include "orkit/rng.hpp"
#include "orkit/sparse.hpp"

namespace orkit {

inline constexpr const char* kTraceFormat = "orkit-trace/1";

// Inputs for all six kernels at one sampled simplex iteration. Dense kernel
// variants use the densified forms of the sparse vectors.
struct KernelRecord {
  SparseVector rho;                  // row of the basis inverse, length rows
  std::vector<std::uint8_t> flags;   // nonbasic flags, length cols
  std::vector<double> d;             // reduced costs, length cols
  SparseVector alpha;                // pivot row, length cols
  std::vector<VarState> state;       // length cols
  double eps_p = 1e-9;
  double eps_d = 1e-7;
  double axpy_scale = 0.0;
  SparseVector axpy_x;               // length cols
  std::vector<double> axpy_y;        // length cols
  double axpy_eps = 1e-9;

  bool operator==(const KernelRecord&) const = default;
};

struct KernelTrace {
  std::string name;
  std::uint64_t seed = 0;
  CscMatrix a;
  CsrMatrix a_rows;  // derived from `a` when reading
  std::vector<KernelRecord> records;
};

struct SyntheticSpec {
  std::int64_t rows = 1000;
  std::int64_t cols = 2000;
  double column_density = 0.01;
  double vector_density = 0.05;
  std::int64_t iterations = 200;
  std::uint64_t seed = kDefaultSeed;
};

// Random matrix with each entry present with probability column_density and
// values uniform on [-1, 1]; every column gets at least one entry.
CscMatrix synthetic_matrix(const SyntheticSpec& spec);

// Samples `spec.iterations` records against `a`. The basis is a random set
// of min(rows, cols) columns per record; rho has vector_density nonzeros.
KernelTrace synthetic_trace(const CscMatrix& a, const SyntheticSpec& spec, std::string name);
KernelTrace synthetic_trace(const SyntheticSpec& spec);

// Header line (JSON) with format version and dimensions, a matrix line, then
// one tab-separated line per record. Numbers round-trip exactly.
void write_trace(const KernelTrace& trace, std::ostream& out);
// Throws TraceVersionError for an unknown format and ParseError otherwise.
KernelTrace read_trace(std::istream& in);

enum class KernelOp { kMatvecDense, kMatvecSparse, kRatioDense, kRatioSparse, kAxpyDense, kAxpySparse };

inline constexpr std::array<KernelOp, 6> kAllKernelOps = {
    KernelOp::kMatvecDense, KernelOp::kMatvecSparse, KernelOp::kRatioDense,
    KernelOp::kRatioSparse, KernelOp::kAxpyDense,    KernelOp::kAxpySparse};

const char* kernel_op_name(KernelOp op);

// 64-bit FNV-1a digest of every output the kernel produces over the trace.
std::uint64_t replay_digest(const KernelTrace& trace, KernelOp op);

// Minimum over `reps` of the mean per-record time of `op`, in seconds. Input
// copies needed by the in-place axpy are made outside the timed region.
double time_kernel(const KernelTrace& trace, KernelOp op, int reps);

double geometric_mean(const std::vector<double>& values);

}  // namespace orkit
