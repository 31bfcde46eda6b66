#pragma once

#include "tensorlev/common.hpp"
#include "tensorlev/features.hpp"

#include <string>

namespace tensorlev {

/// Generalized polynomial kernel
///   K = diag(v) (sum_j alpha_j^2 (X^T X)^{∘j}) diag(v),
/// whose features are the direct sum of alpha_j X^{⊗j} diag(v).
struct GpkSpec {
  Vector alpha;   // q+1 coefficients
  Vector v;       // n column scalars
  DenseMatrix x;  // dataset fed to the tensor blocks (unit columns for NTK)
  bool normalized = false;

  Index degree() const { return static_cast<Index>(alpha.size()) - 1; }
  FeatureDescriptor descriptor() const;
};

/// Exact GPK matrix via Hadamard powers of the Gram matrix.
DenseMatrix gpk_kernel_exact(const GpkSpec& spec);

/// Truncated Taylor GPK for the Gaussian kernel: alpha_j = 1/sqrt(j!),
/// v_i = exp(-||x_i||^2 / 2), degree q the smallest with
/// sum_{l>q} r^l / l! <= eps*lambda/(4n), r = max ||x_i||^2.
GpkSpec gaussian_gpk_spec(const DenseMatrix& x, double eps, double lambda);
/// The Gaussian truncation degree alone.
Index gaussian_truncation_degree(double r, Index n, double eps, double lambda);

/// Taylor coefficient of k_ntk(beta) = (1/pi)(sqrt(1-beta^2) + 2 beta (pi - arccos beta)).
double ntk_taylor_coeff(Index j);
/// k_ntk(beta) in closed form, beta in [-1, 1].
double k_ntk(double beta);
/// 2 - sum_{j<=degree} c_j: the worst-case truncation error at |beta| <= 1.
double ntk_tail(Index degree);

/// Truncated GPK for the two-layer ReLU NTK: v_i = ||x_i||, unit columns,
/// alpha_j = sqrt(c_j), degree the smallest J with ||X||_F^2 * ntk_tail(J) <= eps*lambda/4.
/// `max_degree` bounds the search.
GpkSpec ntk_gpk_spec(const DenseMatrix& x, double eps, double lambda, Index max_degree = 1 << 20);
/// Same, with the degree fixed by the caller.
GpkSpec ntk_gpk_spec_with_degree(const DenseMatrix& x, Index degree);

/// exp(-||x_i - y_j||^2 / 2) for columns of x and y.
DenseMatrix gaussian_kernel(const DenseMatrix& x, const DenseMatrix& y);
DenseMatrix gaussian_kernel_exact(const DenseMatrix& x);
/// ||x|| ||y|| k_ntk(cos angle); zero columns are rejected.
DenseMatrix ntk_kernel(const DenseMatrix& x, const DenseMatrix& y);
DenseMatrix ntk_kernel_exact(const DenseMatrix& x);
/// (x^T y)^q.
DenseMatrix polynomial_kernel(const DenseMatrix& x, const DenseMatrix& y, Index q);

/// s_lambda = sum_i mu_i / (mu_i + lambda) over the eigenvalues of K.
double statistical_dimension(const DenseMatrix& k, double lambda);

/// JSON form {"degree", "alpha", "v", "normalized"}; the dataset is not included.
std::string gpk_spec_to_json(const GpkSpec& spec);
/// Inverse of gpk_spec_to_json; the returned spec has an empty dataset.
GpkSpec gpk_spec_from_json(const std::string& text);

}  // namespace tensorlev
