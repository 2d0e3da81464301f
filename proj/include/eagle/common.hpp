#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace eagle {

// Row-major storage: every kernel in this library walks matrices row by row
// (one row per edge), which is also the on-disk layout of EABGZ1 files.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = std::int64_t;

/// Dense |E|x|E| materialization is refused above this many edges.
inline constexpr std::size_t kDefaultDenseCap = 5000;

/// Bad user input: malformed files, broken invariants, shape mismatches.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A graph whose incidence structure cannot be normalized (unused nodes).
class DegenerateGraphError : public InputError {
 public:
  using InputError::InputError;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

/// Iterative or direct solver failed to produce a usable answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_dims(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

}  // namespace eagle
