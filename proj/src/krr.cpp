#include "tensorlev/krr.hpp"

#include "tensorlev/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace tensorlev {

DenseMatrix kernel_matrix(const KernelChoice& kernel, const DenseMatrix& x, const DenseMatrix& y) {
  require(x.rows() == y.rows(), "kernel_matrix: dimension mismatch");
  switch (kernel.kind) {
    case KernelKind::Polynomial:
      return polynomial_kernel(x, y, kernel.degree);
    case KernelKind::Gaussian:
      return gaussian_kernel(x, y);
    case KernelKind::Ntk:
      return ntk_kernel(x, y);
  }
  throw ContractViolation("kernel_matrix: unknown kernel");
}

DenseMatrix woodbury_coefficients(const DenseMatrix& z, const DenseMatrix& y, double lambda) {
  require(lambda > 0.0, "woodbury_coefficients: lambda must be positive");
  require(z.cols() == y.rows(), "woodbury_coefficients: shape mismatch");
  DenseMatrix inner = z * z.transpose();
  inner.diagonal().array() += lambda;
  Eigen::LLT<DenseMatrix> llt(inner);
  if (llt.info() != Eigen::Success) throw NumericalError("KRR: Woodbury system is not positive definite");
  const DenseMatrix zy = z * y;
  const DenseMatrix out = (y - z.transpose() * llt.solve(zy)) / lambda;
  if (!out.allFinite()) throw NumericalError("KRR: Woodbury solve produced non-finite coefficients");
  return out;
}

DenseMatrix exact_krr_coefficients(const DenseMatrix& k, const DenseMatrix& y, double lambda) {
  require(lambda > 0.0, "exact_krr_coefficients: lambda must be positive");
  require(k.rows() == k.cols() && k.rows() == y.rows(), "exact_krr_coefficients: shape mismatch");
  DenseMatrix a = k;
  a.diagonal().array() += lambda;
  Eigen::LLT<DenseMatrix> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalError("KRR: exact system is not positive definite");
  return llt.solve(y);
}

double rmse(const Vector& pred, const Vector& truth) {
  require(pred.size() == truth.size() && pred.size() > 0, "rmse: size mismatch");
  return std::sqrt((pred - truth).squaredNorm() / static_cast<double>(pred.size()));
}

OneHot one_hot(const Vector& labels) {
  OneHot out;
  out.classes.assign(labels.data(), labels.data() + labels.size());
  std::sort(out.classes.begin(), out.classes.end());
  out.classes.erase(std::unique(out.classes.begin(), out.classes.end()), out.classes.end());
  out.targets = DenseMatrix::Zero(labels.size(), static_cast<Eigen::Index>(out.classes.size()));
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    const auto it = std::lower_bound(out.classes.begin(), out.classes.end(), labels(i));
    out.targets(i, it - out.classes.begin()) = 1.0;
  }
  return out;
}

double error_rate(const DenseMatrix& scores, const std::vector<double>& classes, const Vector& labels) {
  require(scores.rows() == labels.size() && scores.cols() == static_cast<Eigen::Index>(classes.size()),
          "error_rate: shape mismatch");
  Index wrong = 0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best;
    scores.row(i).maxCoeff(&best);
    wrong += classes[static_cast<Index>(best)] != labels(i);
  }
  return static_cast<double>(wrong) / static_cast<double>(labels.size());
}

}  // namespace tensorlev
