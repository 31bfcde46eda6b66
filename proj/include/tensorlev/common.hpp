#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tensorlev {

/// Column-major dense matrix. Columns are data points throughout the library.
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
/// Column-major sparse matrix with sorted row indices per column.
using SparseColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

using Index = std::size_t;

/// A precondition of an operation was not met (dimension mismatch, bad range).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// Invalid user-facing configuration.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed or hit a degenerate input.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Library version string.
const char* version();

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

inline Index next_pow2(Index x) {
  Index p = 1;
  while (p < x) p <<= 1;
  return p;
}

inline bool is_pow2(Index x) { return x != 0 && (x & (x - 1)) == 0; }

/// log2(n) with log2 of 0 and 1 both mapped to 0.
inline double log2_of(Index n) { return n <= 1 ? 0.0 : std::log2(static_cast<double>(n)); }

}  // namespace tensorlev
