#pragma once

#include "tensorlev/common.hpp"
#include "tensorlev/dataset.hpp"
#include "tensorlev/features.hpp"
#include "tensorlev/rng.hpp"
#include "tensorlev/tensor_norm.hpp"

#include <string>
#include <vector>

namespace tensorlev {

/// M -> M (B^T B + lambda I)^{-1/2} through a thin SVD of B.
class RegularizedBasis {
 public:
  RegularizedBasis(const DenseMatrix& b, double lambda);

  Index columns() const { return n_; }
  double lambda() const { return lambda_; }
  /// sqrt(||B^T B|| / lambda + 1).
  double kappa() const { return kappa_; }
  const Vector& singular_values() const { return sigma_; }

  /// M (B^T B + lambda I)^{-1/2} for M with columns() columns.
  DenseMatrix apply_right(const DenseMatrix& m) const;

 private:
  Index n_;
  double lambda_;
  double kappa_;
  DenseMatrix v_;  // right singular vectors, n x r
  Vector sigma_;
};

RegularizedBasis reg_inv_sqrt(const DenseMatrix& b, double lambda);

/// Bucket assignment h: [d] -> [buckets] with its nonempty preimages.
class BucketHash {
 public:
  BucketHash(Index d, Index buckets, RngStream rng);
  /// Restriction of an assignment to its first d coordinates.
  BucketHash(std::vector<std::uint32_t> assignment, Index buckets);

  Index dim() const { return assign_.size(); }
  Index buckets() const { return buckets_; }
  Index bucket_of(Index i) const { return assign_[i]; }
  const std::vector<std::uint32_t>& assignment() const { return assign_; }
  /// Nonempty preimages h^{-1}(r), ordered by r, each sorted.
  const std::vector<std::vector<Index>>& groups() const { return groups_; }
  /// Bucket id of each entry of groups().
  const std::vector<Index>& group_ids() const { return group_ids_; }

 private:
  std::vector<std::uint32_t> assign_;
  Index buckets_;
  std::vector<std::vector<Index>> groups_;
  std::vector<Index> group_ids_;
};

/// Sizing constants of the row samplers. Sizes follow the asymptotic forms
/// with these multipliers; all are overridable.
struct RowSamplerConfig {
  /// TensorNorm sizing for each of the m' banks of the self tensor and GPK
  /// samplers (eps is set per sampler). The median across banks adds
  /// reliability on top of the per-bank repetitions.
  TensorNormConfig tn{10.0, 128, 40.0, 64, 3};
  /// TensorNorm sizing for the single bank of the distinct-dataset sampler.
  TensorNormConfig tn_single{10.0, 128, 40.0, 64, 7};
  /// Gaussian projection rows: ceil(jl_const * q log2 n) for distinct
  /// datasets, ceil(jl_const * q^2 log2 n) otherwise; at least jl_min_rows.
  double jl_const = 1.0;
  Index jl_min_rows = 256;
  /// Median copies m' = max(copies_min, ceil(copies_const * log2 n)).
  double copies_const = 1.0;
  Index copies_min = 5;
  /// Bucket sketch rows n' = ceil(bucket_sketch_const * q^2).
  double bucket_sketch_const = 1.0;
  /// Shared-sign SRHT rows m'' = ceil(srht_rows_const * (q^3 + q^2 kappa) log2 n), clamped to d̄.
  double srht_rows_const = 1.0;
  /// Sampler eps for the TensorNorm banks: distinct datasets use
  /// 1/(tn_eps_distinct * q), self tensor and GPK 1/(tn_eps_self * q).
  double tn_eps_distinct = 20.0;
  double tn_eps_self = 40.0;
};

/// What a sampler call did, beyond the rows.
struct RowSamplerReport {
  Index buckets = 0;
  Index copies = 0;
  Index jl_rows = 0;
  Index srht_rows = 0;
  Index distinct_states = 0;
  Index fallback_rows = 0;
  double kappa = 1.0;
  std::vector<double> block_distribution;  // GPK only
  std::vector<std::string> warnings;
};

/// Rank-s row norm sampler for (X^(1) ⊗ ... ⊗ X^(q)) (B^T B + lambda I)^{-1/2}.
SampledRows row_sampler_tensor(const std::vector<Dataset>& xs, const DenseMatrix& b,
                               double lambda, Index s, const RowSamplerConfig& cfg,
                               RngStream rng, RowSamplerReport* report = nullptr);

/// Rank-s row norm sampler for X^{⊗q} (B^T B + lambda I)^{-1/2}, using
/// shared-sign SRHT compressed TensorNorm banks.
SampledRows row_sampler_selftensor(const Dataset& x, Index q, const DenseMatrix& b, double lambda,
                                   Index s, const RowSamplerConfig& cfg, RngStream rng,
                                   RowSamplerReport* report = nullptr);

/// Rank-s row norm sampler for the GPK features (sum_j alpha_j X^{⊗j} diag(v)) (B^T B + lambda I)^{-1/2}.
SampledRows row_sampler_gpk(const Dataset& x, const Vector& v, const Vector& alpha,
                            const DenseMatrix& b, double lambda, Index s,
                            const RowSamplerConfig& cfg, RngStream rng,
                            RowSamplerReport* report = nullptr);

/// Dispatches on the descriptor kind.
SampledRows row_sampler(const FeatureDescriptor& desc, const DenseMatrix& b, double lambda,
                        Index s, const RowSamplerConfig& cfg, RngStream rng,
                        RowSamplerReport* report = nullptr);

}  // namespace tensorlev
