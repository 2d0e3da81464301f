#pragma once

#include <functional>

#include "eagle/common.hpp"
#include "eagle/csr.hpp"

namespace eagle {

/// (1 - alpha) (I - alpha P)^{-1} rhs by dense LU. The exact closed form every
/// factorized path is checked against.
Matrix dense_inverse_solve(const Matrix& p_dense, double alpha, const Matrix& rhs,
                           std::size_t cap = kDefaultDenseCap);

/// (1 - alpha) sum_{t=0..t_max} alpha^t P^t rhs.
Matrix truncated_series(const Matrix& p_dense, double alpha, const Matrix& rhs, Index t_max,
                        std::size_t cap = kDefaultDenseCap);

using LinearOperator = std::function<Matrix(const Matrix&)>;

/// Applies P = B B^T without forming it: two sparse products per call.
LinearOperator transition_operator(const SparseCsr& b);

struct PowerIterationResult {
  Matrix z;
  Index iterations = 0;
  double last_update = 0.0;
};

/// Fixed point of Z <- (1 - alpha) rhs + alpha P Z, started at (1 - alpha) rhs
/// and stopped once the largest absolute update drops below tol. Throws
/// NumericalError after max_iters.
PowerIterationResult power_iteration_solve(const LinearOperator& matvec, double alpha, const Matrix& rhs,
                                           double tol = 1e-12, Index max_iters = 100000);

}  // namespace eagle
