#pragma once

#include "tensorlev/common.hpp"
#include "tensorlev/features.hpp"

#include <vector>

namespace tensorlev {

/// Bijection between flat rows of a materialized Phi and (block, multi-index).
/// Within a block, i_1 is the most significant digit. GPK blocks are laid out
/// by degree 0..q, so block b starts after sum_{j<b} d^j rows.
class RowCodec {
 public:
  RowCodec() = default;
  /// `dims` are the factor row counts (length q); `blocks` lists which
  /// block degrees exist, in increasing order.
  RowCodec(std::vector<Index> dims, std::vector<Index> blocks);
  static RowCodec for_descriptor(const FeatureDescriptor& desc);

  Index rows() const { return total_; }
  Index flat(Index block, const std::vector<Index>& index) const;
  std::pair<Index, std::vector<Index>> decode(Index flat) const;

 private:
  std::vector<Index> dims_;
  std::vector<Index> blocks_;
  std::vector<Index> offsets_;
  std::vector<Index> sizes_;
  Index total_ = 0;
};

struct MaterializedPhi {
  DenseMatrix phi;
  RowCodec codec;
};

constexpr Index kDefaultMaterializeCap = Index{1} << 22;

/// Dense Phi; throws ContractViolation when rows * n exceeds `cap`.
MaterializedPhi materialize_phi(const FeatureDescriptor& desc, Index cap = kDefaultMaterializeCap);

/// l_i = ||Phi_i (Phi^T Phi + lambda I)^{-1/2}||^2 by dense eigendecomposition.
Vector exact_ridge_leverage_scores(const DenseMatrix& phi, double lambda);

/// Normalized squared row norms of Phi (B^T B + lambda I)^{-1/2}.
Vector exact_row_norm_distribution(const DenseMatrix& phi, const DenseMatrix& b, double lambda);

/// (1/2) sum |p_i - q_i|.
double tv_distance(const Vector& p, const Vector& q);

}  // namespace tensorlev
