#pragma once

#include "tensorlev/common.hpp"
#include "tensorlev/rng.hpp"

#include <algorithm>
#include <vector>

namespace testutil {

using tensorlev::DenseMatrix;
using tensorlev::Vector;

// Kronecker product of two vectors, first factor most significant.
inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// Column-wise Kronecker product of matrices with equal column counts.
inline DenseMatrix kron_cols(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols());
  for (Eigen::Index c = 0; c < a.cols(); ++c) out.col(c) = kron(a.col(c), b.col(c));
  return out;
}

inline Vector random_vector(Eigen::Index n, tensorlev::RngStream rng) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

inline DenseMatrix random_matrix(Eigen::Index r, Eigen::Index c, tensorlev::RngStream rng) {
  DenseMatrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng.normal();
  return m;
}

inline Vector e1() { return Vector::Ones(1); }

inline double lower_median(std::vector<double> v) {
  const std::size_t k = (v.size() - 1) / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return v[k];
}

}  // namespace testutil
