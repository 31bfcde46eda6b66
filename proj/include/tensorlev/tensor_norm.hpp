#pragma once

#include "tensorlev/common.hpp"
#include "tensorlev/dataset.hpp"
#include "tensorlev/rng.hpp"

#include <iosfwd>
#include <vector>

namespace tensorlev {

/// Sizing of a TensorNormDs. Zero caps mean "uncapped".
struct TensorNormConfig {
  /// PolySketch dimension m = ceil(poly_const * k / eps^2).
  double poly_const = 10.0;
  Index poly_dim_cap = 0;
  /// SRHT dimension m' = ceil(srht_const * log2(1/eps) / eps^2), capped.
  double srht_const = 40.0;
  Index srht_dim_cap = 4096;
  /// Repetitions T; 0 selects max(5, ceil(2 log2 n)).
  Index repetitions = 0;
};

/// Bank of T compressed prefix-replaced tensor products answering
/// Query(V, j) = median_i ||P_{i,j} V||_F^2, an estimate of
/// ||(X^(j+1) ⊗ ... ⊗ X^(k)) V||_F^2.
///
/// P_{i,j} = Q_i S_i (E_1^{⊗j} ⊗ X^(j+1) ⊗ ... ⊗ X^(k)), with S_i a degree-k
/// PolySketch and Q_i an SRHT. Immutable once built.
class TensorNormDs {
 public:
  TensorNormDs() = default;

  static TensorNormDs build(const std::vector<Dataset>& inputs, double eps,
                            const TensorNormConfig& cfg, RngStream rng);

  static Index default_repetitions(Index n);
  static Index srht_dim_for(double eps, const TensorNormConfig& cfg);

  Index factor_count() const { return k_; }
  Index repetitions() const { return sketches_.size(); }
  Index poly_dim() const { return poly_dim_; }
  Index srht_dim() const { return srht_dim_; }
  Index columns() const { return n_; }
  double eps() const { return eps_; }

  /// P_{i,j}, srht_dim() x columns().
  const DenseMatrix& sketch(Index rep, Index prefix) const;

  /// Lower median over repetitions of ||P_{i,j} V||_F^2, V with columns() rows.
  double query(const DenseMatrix& v, Index prefix) const;
  double query(const Vector& v, Index prefix) const;
  double query(const SparseColMatrix& v, Index prefix) const;

  /// Bytes held by the P matrices.
  std::size_t stored_bytes() const;

  /// Versioned little-endian binary form.
  void save(std::ostream& out) const;
  static TensorNormDs load(std::istream& in);

  bool operator==(const TensorNormDs& other) const;

 private:
  Index k_ = 0;
  Index n_ = 0;
  Index poly_dim_ = 0;
  Index srht_dim_ = 0;
  double eps_ = 0.0;
  std::vector<std::vector<DenseMatrix>> sketches_;  // [rep][prefix]
};

/// Lower median (element (size-1)/2 in sorted order). Reorders `values`.
double lower_median(std::vector<double>& values);

}  // namespace tensorlev
