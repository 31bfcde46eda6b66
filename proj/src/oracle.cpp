#include "tensorlev/oracle.hpp"

#include <cmath>
#include <string>

namespace tensorlev {

RowCodec::RowCodec(std::vector<Index> dims, std::vector<Index> blocks)
    : dims_(std::move(dims)), blocks_(std::move(blocks)) {
  require(!blocks_.empty(), "RowCodec: no blocks");
  for (Index b : blocks_) {
    require(b <= dims_.size(), "RowCodec: block degree exceeds factor count");
    Index size = 1;
    for (Index t = 0; t < b; ++t) size *= dims_[t];
    offsets_.push_back(total_);
    sizes_.push_back(size);
    total_ += size;
  }
}

RowCodec RowCodec::for_descriptor(const FeatureDescriptor& desc) {
  std::vector<Index> dims;
  for (Index a = 0; a < desc.degree(); ++a) dims.push_back(desc.factor(a).rows());
  std::vector<Index> blocks;
  for (Index b = desc.first_block(); b <= desc.degree(); ++b) blocks.push_back(b);
  return RowCodec(std::move(dims), std::move(blocks));
}

Index RowCodec::flat(Index block, const std::vector<Index>& index) const {
  for (Index k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k] != block) continue;
    require(index.size() == block, "RowCodec: multi-index length mismatch");
    Index f = 0;
    for (Index t = 0; t < block; ++t) {
      require(index[t] < dims_[t], "RowCodec: index out of range");
      f = f * dims_[t] + index[t];
    }
    return offsets_[k] + f;
  }
  throw ContractViolation("RowCodec: unknown block " + std::to_string(block));
}

std::pair<Index, std::vector<Index>> RowCodec::decode(Index flat) const {
  require(flat < total_, "RowCodec: row out of range");
  Index k = 0;
  while (flat >= offsets_[k] + sizes_[k]) ++k;
  Index rest = flat - offsets_[k];
  const Index b = blocks_[k];
  std::vector<Index> index(b);
  for (Index t = b; t-- > 0;) {
    index[t] = rest % dims_[t];
    rest /= dims_[t];
  }
  return {b, index};
}

MaterializedPhi materialize_phi(const FeatureDescriptor& desc, Index cap) {
  MaterializedPhi out;
  out.codec = RowCodec::for_descriptor(desc);
  const Index n = desc.columns();
  require(out.codec.rows() * n <= cap, "materialize_phi: " + std::to_string(out.codec.rows()) +
                                           " x " + std::to_string(n) +
                                           " entries exceed the cap of " + std::to_string(cap));
  std::vector<DenseMatrix> dense;
  for (Index a = 0; a < desc.degree(); ++a) dense.push_back(desc.factor(a).to_dense());
  const auto rows = static_cast<Eigen::Index>(out.codec.rows());
  out.phi.resize(rows, static_cast<Eigen::Index>(n));
  for (Eigen::Index r = 0; r < rows; ++r) {
    auto [b, index] = out.codec.decode(static_cast<Index>(r));
    const double a = desc.kind() == FeatureKind::Gpk ? desc.alpha()(static_cast<Eigen::Index>(b)) : 1.0;
    for (Index c = 0; c < n; ++c) {
      double val = a * desc.scale()(static_cast<Eigen::Index>(c));
      for (Index t = 0; t < b; ++t)
        val *= dense[t](static_cast<Eigen::Index>(index[t]), static_cast<Eigen::Index>(c));
      out.phi(r, static_cast<Eigen::Index>(c)) = val;
    }
  }
  return out;
}

namespace {

DenseMatrix inv_sqrt_psd_plus(const DenseMatrix& g, double lambda) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(g);
  if (es.info() != Eigen::Success) throw NumericalError("oracle: eigensolver failed");
  const Vector d = (es.eigenvalues().array().max(0.0) + lambda).rsqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Vector exact_ridge_leverage_scores(const DenseMatrix& phi, double lambda) {
  require(lambda > 0.0, "leverage scores: lambda must be positive");
  const DenseMatrix r = inv_sqrt_psd_plus(phi.transpose() * phi, lambda);
  return (phi * r).rowwise().squaredNorm();
}

Vector exact_row_norm_distribution(const DenseMatrix& phi, const DenseMatrix& b, double lambda) {
  require(lambda > 0.0, "row norm distribution: lambda must be positive");
  require(b.cols() == phi.cols(), "row norm distribution: B column count mismatch");
  const DenseMatrix r = inv_sqrt_psd_plus(b.transpose() * b, lambda);
  Vector p = (phi * r).rowwise().squaredNorm();
  const double total = p.sum();
  if (!(total > 0.0)) throw NumericalError("row norm distribution: matrix is zero");
  return p / total;
}

double tv_distance(const Vector& p, const Vector& q) {
  require(p.size() == q.size(), "tv_distance: length mismatch");
  require(std::abs(p.sum() - 1.0) <= 1e-9 && std::abs(q.sum() - 1.0) <= 1e-9,
          "tv_distance: inputs must be normalized");
  return 0.5 * (p - q).cwiseAbs().sum();
}

}  // namespace tensorlev
