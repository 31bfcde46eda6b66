#pragma once

#include "tensorlev/common.hpp"
#include "tensorlev/features.hpp"
#include "tensorlev/row_sampler.hpp"

#include <cstdint>
#include <vector>

namespace tensorlev {

struct SamplerRunConfig {
  double eps = 0.5;
  double lambda = 1.0;
  /// Upper bound on the statistical dimension s_lambda.
  double mu = 1.0;
  /// s = ceil(samples_const * mu / eps^2 * log2 n).
  double samples_const = 4.0;
  /// When nonzero, overrides the formula for s.
  Index samples_override = 0;
  /// Largest accepted ||Phi||_F^2 / (eps lambda).
  double ratio_cap = 1e15;
  RowSamplerConfig row;
  std::uint64_t seed = 0;
};

struct LevelRecord {
  double lambda = 0.0;
  double seconds = 0.0;
  RowSamplerReport report;
};

struct RecursiveResult {
  SampledRows rows;
  /// Pi * Phi, s x n.
  DenseMatrix sketch;
  Index s = 0;
  double lambda0 = 0.0;
  /// Regularizer of the last RowSampler call, in (lambda, 2 lambda].
  double last_level_lambda = 0.0;
  std::vector<LevelRecord> levels;
  /// True when lambda >= lambda0 and a single level ran at lambda0.
  bool degenerate = false;
};

/// ceil(c * mu / eps^2 * log2 n), at least 1.
Index sample_count(double samples_const, double mu, double eps, Index n);

/// Number of halvings T = ceil(log2(lambda0 / lambda)).
Index level_count(double lambda0, double lambda);

/// Recursive ridge leverage score sampling: starts from a zero sketch at
/// lambda0 = ||Phi||_F^2 / eps and halves the regularizer each level.
RecursiveResult recursive_leverage_sample(const FeatureDescriptor& desc, const SamplerRunConfig& cfg);

struct SpectralCheck {
  bool pass = false;
  /// Smallest eps' for which the sandwich holds: max_i |1 - 1/mu_i|.
  double max_dev = 0.0;
  double min_eig = 0.0;
  double max_eig = 0.0;
};

/// Eigenvalues of (K + lambda I)^{-1/2} (Z^T Z + lambda I) (K + lambda I)^{-1/2}
/// must lie in [1/(1+eps), 1/(1-eps)] (1e-9 slack).
SpectralCheck spectral_check(const DenseMatrix& k, const DenseMatrix& z, double lambda, double eps);

}  // namespace tensorlev
