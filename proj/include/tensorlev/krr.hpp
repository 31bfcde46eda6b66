#pragma once

#include "tensorlev/common.hpp"

#include <string>
#include <vector>

namespace tensorlev {

enum class KernelKind { Polynomial, Gaussian, Ntk };

struct KernelChoice {
  KernelKind kind = KernelKind::Gaussian;
  Index degree = 2;  // polynomial only
};

/// k(x_i, y_j) for columns of x and y (n_x x n_y).
DenseMatrix kernel_matrix(const KernelChoice& kernel, const DenseMatrix& x, const DenseMatrix& y);

/// (Z^T Z + lambda I)^{-1} Y through (I - Z^T (Z Z^T + lambda I)^{-1} Z) Y / lambda.
DenseMatrix woodbury_coefficients(const DenseMatrix& z, const DenseMatrix& y, double lambda);

/// (K + lambda I)^{-1} Y.
DenseMatrix exact_krr_coefficients(const DenseMatrix& k, const DenseMatrix& y, double lambda);

double rmse(const Vector& pred, const Vector& truth);

/// Labels mapped to sorted distinct classes.
struct OneHot {
  std::vector<double> classes;
  DenseMatrix targets;  // n x classes
};
OneHot one_hot(const Vector& labels);

/// Fraction of rows whose argmax class differs from the label.
double error_rate(const DenseMatrix& scores, const std::vector<double>& classes, const Vector& labels);

}  // namespace tensorlev
