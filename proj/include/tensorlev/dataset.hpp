#pragma once

#include "tensorlev/common.hpp"
#include "tensorlev/sketch.hpp"

#include <memory>

namespace tensorlev {

/// A d x n data matrix whose columns are data points, stored dense or sparse.
/// Cheap to copy (storage is shared and immutable).
class Dataset {
 public:
  Dataset();
  Dataset(DenseMatrix x);  // NOLINT(google-explicit-constructor)
  Dataset(SparseColMatrix x);  // NOLINT(google-explicit-constructor)

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nnz() const;
  bool is_sparse() const { return sparse_ != nullptr; }

  DenseMatrix to_dense() const;
  const DenseMatrix* dense_ptr() const { return dense_.get(); }
  const SparseColMatrix* sparse_ptr() const { return sparse_.get(); }

  /// out <- cs * column `col`.
  void sketch_column(const CountSketch& cs, Index col, double* out) const;
  /// Row i as a dense length-n vector.
  Vector row(Index i) const;
  /// Squared Euclidean norm of every column.
  Vector column_sq_norms() const;
  /// Y X^T for Y with n columns (result has d columns).
  DenseMatrix right_multiply_transpose(const DenseMatrix& y) const;
  /// X^T X.
  DenseMatrix gram() const;
  /// Column subset.
  Dataset select_columns(const std::vector<Index>& cols) const;
  /// Scales every column j by w[j].
  Dataset scale_columns(const Vector& w) const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::shared_ptr<const DenseMatrix> dense_;
  std::shared_ptr<const SparseColMatrix> sparse_;
  std::shared_ptr<const Eigen::SparseMatrix<double, Eigen::RowMajor>> sparse_rows_;
};

}  // namespace tensorlev
