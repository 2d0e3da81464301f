#include "eagle/solvers.hpp"

#include <cmath>
#include <limits>

#include "eagle/graph.hpp"
#include "eagle/kernels.hpp"

namespace eagle {

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InputError("alpha must lie in [0, 1)");
}

void check_square(const Matrix& p, const Matrix& rhs, std::size_t cap) {
  require_dims(p.rows() == p.cols(), "transition matrix must be square");
  require_dims(rhs.rows() == p.rows(), "rhs rows must match the transition matrix");
  check_dense_cap(p.rows(), cap);
}

}  // namespace

Matrix dense_inverse_solve(const Matrix& p_dense, double alpha, const Matrix& rhs, std::size_t cap) {
  check_alpha(alpha);
  check_square(p_dense, rhs, cap);
  const Index n = p_dense.rows();
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - alpha * Eigen::MatrixXd(p_dense);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  if (n > 0 && !(lu.rcond() > std::numeric_limits<double>::epsilon()))
    throw NumericalError("dense_inverse_solve: I - alpha P is singular to working precision");
  Matrix out = lu.solve(Eigen::MatrixXd((1.0 - alpha) * rhs));
  if (!out.allFinite()) throw NumericalError("dense_inverse_solve: non-finite solution");
  return out;
}

Matrix truncated_series(const Matrix& p_dense, double alpha, const Matrix& rhs, Index t_max, std::size_t cap) {
  check_alpha(alpha);
  check_square(p_dense, rhs, cap);
  if (t_max < 0) throw InputError("truncated_series: negative T");
  Matrix term = rhs;
  Matrix acc = rhs;
  for (Index t = 1; t <= t_max; ++t) {
    term = alpha * kernels::gemm(p_dense, term);
    acc += term;
  }
  return (1.0 - alpha) * acc;
}

LinearOperator transition_operator(const SparseCsr& b) {
  return [b, bt = b.transpose()](const Matrix& z) { return kernels::spmm(b, kernels::spmm(bt, z)); };
}

PowerIterationResult power_iteration_solve(const LinearOperator& matvec, double alpha, const Matrix& rhs,
                                           double tol, Index max_iters) {
  check_alpha(alpha);
  if (!(tol > 0.0)) throw InputError("power_iteration_solve: tol must be positive");
  const Matrix base = (1.0 - alpha) * rhs;
  PowerIterationResult res{base, 0, 0.0};
  while (res.iterations < max_iters) {
    Matrix next = base;
    if (alpha != 0.0) next += alpha * matvec(res.z);
    res.last_update = rhs.size() == 0 ? 0.0 : (next - res.z).cwiseAbs().maxCoeff();
    res.z = std::move(next);
    ++res.iterations;
    if (!std::isfinite(res.last_update)) break;
    if (res.last_update < tol) return res;
  }
  throw NumericalError("power_iteration_solve: no convergence after " + std::to_string(res.iterations) +
                       " iterations (last update " + std::to_string(res.last_update) + ")");
}

}  // namespace eagle
