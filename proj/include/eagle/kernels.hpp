#pragma once

// Data-parallel building blocks. Each kernel exists twice: an OpenMP version
// in eagle::kernels and a single-threaded reference in eagle::kernels::serial.
// Both walk rows in the same order with the same per-row accumulation, so for
// spmm and the elementwise kernels the two agree bitwise. The dense products
// agree to rounding (block boundaries change Eigen's panel sizes).
//
// For a fixed thread count every kernel is bitwise reproducible: work is split
// into static contiguous chunks and no kernel uses atomics or dynamic
// scheduling.

#include "eagle/common.hpp"
#include "eagle/csr.hpp"

namespace eagle::kernels {

/// a * b with a sparse.
Matrix spmm(const SparseCsr& a, const Matrix& b);

/// a * b, split over output row blocks.
Matrix gemm(const Matrix& a, const Matrix& b);

/// a^T * b, split over output column blocks (the reduction runs over rows of
/// a and b, which stays inside one thread).
Matrix gemm_tn(const Matrix& a, const Matrix& b);

/// q * (q^T * h) scaled by `scale`; never forms q q^T.
Matrix lowrank_apply(const Matrix& q, const Matrix& h, double scale);

/// max(x, 0) elementwise.
Matrix relu(const Matrix& x);

/// 1 / (1 + exp(-x)) elementwise.
Matrix sigmoid(const Matrix& x);

int num_threads();

namespace serial {
Matrix spmm(const SparseCsr& a, const Matrix& b);
Matrix gemm(const Matrix& a, const Matrix& b);
Matrix gemm_tn(const Matrix& a, const Matrix& b);
Matrix lowrank_apply(const Matrix& q, const Matrix& h, double scale);
Matrix relu(const Matrix& x);
Matrix sigmoid(const Matrix& x);
}  // namespace serial

}  // namespace eagle::kernels
