#pragma once

#include "tensorlev/common.hpp"
#include "tensorlev/rng.hpp"

namespace tensorlev {

/// n standard normal points in R^d rescaled so the largest norm is `radius`.
DenseMatrix gaussian_cloud(Index d, Index n, double radius, RngStream rng);

/// Sparse d x n matrix with min(k, d) normal entries per column at random
/// rows, each column scaled to unit norm.
SparseColMatrix sparse_unit_cloud(Index d, Index n, Index k, RngStream rng);

/// Smooth regression target on a Gaussian cloud plus normal noise.
struct RegressionTask {
  DenseMatrix x_train, x_test;
  Vector y_train, y_test;
};
RegressionTask make_regression(Index d, Index n_train, Index n_test, double radius, double noise,
                               std::uint64_t seed);

/// Points labeled 0..classes-1 by their nearest random center.
struct ClassificationTask {
  DenseMatrix x_train, x_test;
  Vector y_train, y_test;
};
ClassificationTask make_classification(Index d, Index n_train, Index n_test, Index classes,
                                       double radius, std::uint64_t seed);

}  // namespace tensorlev
