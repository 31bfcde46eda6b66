#pragma once

#include "tensorlev/common.hpp"
#include "tensorlev/dataset.hpp"

#include <vector>

namespace tensorlev {

enum class FeatureKind { TensorProduct, SelfTensor, Gpk };

/// Implicit description of a feature matrix Phi with n columns:
///  - TensorProduct: X^(1) ⊗ ... ⊗ X^(q) (column-wise),
///  - SelfTensor:    X^{⊗q},
///  - Gpk:           the direct sum over b = 0..q of alpha_b X^{⊗b} diag(v).
/// Phi itself is never formed here; see oracle.hpp for that.
class FeatureDescriptor {
 public:
  static FeatureDescriptor tensor_product(std::vector<Dataset> factors);
  static FeatureDescriptor self_tensor(Dataset x, Index q);
  static FeatureDescriptor gpk(Dataset x, Vector v, Vector alpha);

  FeatureKind kind() const { return kind_; }
  Index columns() const { return n_; }
  /// q: number of tensor factors (the top GPK degree).
  Index degree() const { return q_; }
  /// Dataset feeding tensor position a (0-based, a < q).
  const Dataset& factor(Index a) const;
  /// Column scalars (all ones unless Gpk).
  const Vector& scale() const { return v_; }
  /// Block weights alpha_0..alpha_q (Gpk only; otherwise a single 1 for block q).
  const Vector& alpha() const { return alpha_; }
  /// Blocks that exist: 0..q for Gpk, just q otherwise.
  Index first_block() const { return kind_ == FeatureKind::Gpk ? 0 : q_; }

  /// ||Phi||_F^2 from column norms, O(nnz).
  double frobenius_sq() const { return frob_sq_; }

 private:
  FeatureDescriptor() = default;
  void finish();

  FeatureKind kind_ = FeatureKind::TensorProduct;
  Index n_ = 0;
  Index q_ = 0;
  std::vector<Dataset> factors_;
  Vector v_;
  Vector alpha_;
  double frob_sq_ = 0.0;
};

/// ||Phi||_F^2 of a descriptor.
double frobenius_sq(const FeatureDescriptor& desc);

/// One sampled row of Phi: block b and multi-index (i_1..i_b) with
/// weight 1/sqrt(s * prob).
struct SampledRow {
  Index block = 0;
  std::vector<Index> index;
  double weight = 0.0;
  double prob = 0.0;
  /// Set when a zero-mass level forced a uniform fallback draw.
  bool fallback = false;
};

using SampledRows = std::vector<SampledRow>;

/// Pi * Phi as an s x n matrix; row l is
/// weight_l * alpha_b * v ∘ X^(1)_{i_1,*} ∘ ... ∘ X^(b)_{i_b,*}.
DenseMatrix materialize_sampled_rows(const SampledRows& rows, const FeatureDescriptor& desc);

}  // namespace tensorlev
