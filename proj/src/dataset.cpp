#include "tensorlev/dataset.hpp"

#include <cmath>

namespace tensorlev {

namespace {

void check_finite(const double* v, Index n) {
  for (Index i = 0; i < n; ++i)
    if (!std::isfinite(v[i])) throw DataError("dataset contains a non-finite value");
}

}  // namespace

Dataset::Dataset() : dense_(std::make_shared<DenseMatrix>()) {}

Dataset::Dataset(DenseMatrix x)
    : rows_(static_cast<Index>(x.rows())), cols_(static_cast<Index>(x.cols())) {
  check_finite(x.data(), static_cast<Index>(x.size()));
  dense_ = std::make_shared<DenseMatrix>(std::move(x));
}

Dataset::Dataset(SparseColMatrix x)
    : rows_(static_cast<Index>(x.rows())), cols_(static_cast<Index>(x.cols())) {
  x.prune(0.0);
  x.makeCompressed();
  check_finite(x.valuePtr(), static_cast<Index>(x.nonZeros()));
  sparse_rows_ = std::make_shared<Eigen::SparseMatrix<double, Eigen::RowMajor>>(x);
  sparse_ = std::make_shared<SparseColMatrix>(std::move(x));
}

Index Dataset::nnz() const {
  if (sparse_) return static_cast<Index>(sparse_->nonZeros());
  return static_cast<Index>((dense_->array() != 0.0).count());
}

DenseMatrix Dataset::to_dense() const { return sparse_ ? DenseMatrix(*sparse_) : *dense_; }

void Dataset::sketch_column(const CountSketch& cs, Index col, double* out) const {
  if (sparse_) {
    cs.apply_column(*sparse_, col, out);
  } else {
    cs.apply_into(dense_->col(static_cast<Eigen::Index>(col)).data(), out);
  }
}

Vector Dataset::row(Index i) const {
  require(i < rows_, "Dataset::row: index out of range");
  if (!sparse_) return dense_->row(static_cast<Eigen::Index>(i)).transpose();
  Vector out = Vector::Zero(static_cast<Eigen::Index>(cols_));
  for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(*sparse_rows_,
                                                                     static_cast<Eigen::Index>(i));
       it; ++it)
    out(it.col()) = it.value();
  return out;
}

Vector Dataset::column_sq_norms() const {
  if (!sparse_) return dense_->colwise().squaredNorm().transpose();
  Vector out(static_cast<Eigen::Index>(cols_));
  for (Eigen::Index c = 0; c < sparse_->outerSize(); ++c) out(c) = sparse_->col(c).squaredNorm();
  return out;
}

DenseMatrix Dataset::right_multiply_transpose(const DenseMatrix& y) const {
  require(static_cast<Index>(y.cols()) == cols_, "Dataset: product shape mismatch");
  if (sparse_) return y * sparse_->transpose();
  return y * dense_->transpose();
}

DenseMatrix Dataset::gram() const {
  if (sparse_) return DenseMatrix(sparse_->transpose() * *sparse_);
  return dense_->transpose() * *dense_;
}

Dataset Dataset::select_columns(const std::vector<Index>& cols) const {
  if (!sparse_) {
    DenseMatrix out(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols.size()));
    for (Index j = 0; j < cols.size(); ++j) {
      require(cols[j] < cols_, "Dataset: column index out of range");
      out.col(static_cast<Eigen::Index>(j)) = dense_->col(static_cast<Eigen::Index>(cols[j]));
    }
    return Dataset(std::move(out));
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (Index j = 0; j < cols.size(); ++j) {
    require(cols[j] < cols_, "Dataset: column index out of range");
    for (SparseColMatrix::InnerIterator it(*sparse_, static_cast<Eigen::Index>(cols[j])); it; ++it)
      trip.emplace_back(it.row(), static_cast<Eigen::Index>(j), it.value());
  }
  SparseColMatrix out(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols.size()));
  out.setFromTriplets(trip.begin(), trip.end());
  return Dataset(std::move(out));
}

Dataset Dataset::scale_columns(const Vector& w) const {
  require(static_cast<Index>(w.size()) == cols_, "Dataset: scale vector length mismatch");
  if (!sparse_) return Dataset(DenseMatrix(*dense_ * w.asDiagonal()));
  return Dataset(SparseColMatrix(*sparse_ * w.asDiagonal()));
}

}  // namespace tensorlev
