#pragma once

#include "tensorlev/common.hpp"
#include "tensorlev/fft.hpp"
#include "tensorlev/rng.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace tensorlev {

// ---------------------------------------------------------------------------
// CountSketch

/// Sparse sign-hash projection R^d -> R^m: out[h(i)] += sigma(i) * x[i].
class CountSketch {
 public:
  CountSketch() = default;
  /// Hash and signs drawn from `rng` (hash from child 0, signs from child 1).
  CountSketch(Index input_dim, Index output_dim, RngStream rng);
  /// Explicit hash/sign tables.
  CountSketch(std::vector<std::uint32_t> hash, std::vector<std::int8_t> signs, Index output_dim);

  Index input_dim() const { return hash_.size(); }
  Index output_dim() const { return output_dim_; }
  const std::vector<std::uint32_t>& hash() const { return hash_; }
  const std::vector<std::int8_t>& signs() const { return signs_; }

  Vector apply(const Vector& x) const;
  /// Columnwise application.
  DenseMatrix apply(const DenseMatrix& x) const;
  /// out (length m) <- CS * x, where x has input_dim entries. Zeros are skipped.
  void apply_into(const double* x, double* out) const;
  /// out <- CS * column `col` of a sparse matrix; cost proportional to its nnz.
  void apply_column(const SparseColMatrix& x, Index col, double* out) const;
  /// out <- CS * e_1.
  void apply_e1(double* out) const;

 private:
  std::vector<std::uint32_t> hash_;
  std::vector<std::int8_t> signs_;
  Index output_dim_ = 0;
};

// ---------------------------------------------------------------------------
// Degree-2 TensorSketch

/// Sketches a ⊗ b for a, b in R^m into R^m as the circular convolution of two
/// independent CountSketches C1 a and C2 b, computed through the DFT.
class TensorSketch2 {
 public:
  using Spectrum = std::vector<std::complex<double>>;

  TensorSketch2(Index dim, RngStream rng);
  TensorSketch2(CountSketch left, CountSketch right);

  Index dim() const { return dim_; }

  Vector apply(const Vector& a, const Vector& b) const;

  /// spec <- DFT(C1 a). `scratch` must hold dim() doubles.
  void left_spectrum(const double* a, std::complex<double>* spec, double* scratch) const;
  /// spec <- DFT(C2 b).
  void right_spectrum(const double* b, std::complex<double>* spec, double* scratch) const;
  /// out <- IDFT(fa ∘ fb). `scratch` must hold dim()/2+1 complex values.
  void combine(const std::complex<double>* fa, const std::complex<double>* fb,
               std::complex<double>* scratch, double* out) const;

 private:
  Index dim_;
  CountSketch left_;
  CountSketch right_;
  RealFft fft_;
};

// ---------------------------------------------------------------------------
// PolySketch

/// Degree-q PolySketch: a complete binary tree with q̄ = next_pow2(q) CountSketch
/// leaves and q̄-1 TensorSketch internal nodes, all with output dimension m.
/// Leaf j < q sketches factor j; padding leaves sketch the 1-dimensional e_1.
///
/// The tree is immutable after construction; sweeps keep their per-node cache
/// in a local workspace, so concurrent sweeps on one tree are safe.
class PolySketchTree {
 public:
  PolySketchTree(std::vector<Index> factor_dims, Index sketch_dim, RngStream rng);

  /// Sketch dimension for a target distortion: ceil(c_ps * q / eps^2).
  static Index dimension_for(Index degree, double eps, double c_ps);

  Index degree() const { return factor_dims_.size(); }
  Index padded_degree() const { return padded_; }
  Index sketch_dim() const { return dim_; }
  const std::vector<Index>& factor_dims() const { return factor_dims_; }

  /// S^q (u_1 ⊗ ... ⊗ u_q).
  Vector apply(std::span<const Vector> factors) const;

  /// Entry j (j = 0..q) is S^q(e_1^{⊗j} ⊗ u_{j+1} ⊗ ... ⊗ u_q), each obtained
  /// from the previous one by re-sketching one leaf and its ancestors.
  std::vector<Vector> prefix_sweep(std::span<const Vector> factors) const;

  /// Generic sweep. `sketch_leaf(j, leaf, out)` writes leaf * u_j (j < q)
  /// into out; `emit(j, v)` receives the sketch for prefix j.
  /// With `full` false only prefix 0 is produced.
  using LeafFn = std::function<void(Index, const CountSketch&, double*)>;
  using EmitFn = std::function<void(Index, const double*)>;
  void sweep(const LeafFn& sketch_leaf, const EmitFn& emit, bool full) const;

 private:
  std::vector<Index> factor_dims_;
  Index padded_;
  Index dim_;
  std::vector<CountSketch> leaves_;     // padded_ leaves
  std::vector<TensorSketch2> nodes_;    // heap index u in [1, padded_) stored at u-1
};

// ---------------------------------------------------------------------------
// Hadamard transforms

/// In-place unnormalized Walsh-Hadamard transform, v <- H v with H^T H = d I.
void fwht_inplace(std::span<double> v);

/// Subsampled randomized Hadamard transform (1/sqrt(m)) P H D on R^d, with
/// inputs zero-padded to d̄ = next_pow2(d) and P sampling m distinct
/// coordinates of [d̄] without replacement.
class Srht {
 public:
  /// Signs from rng.child(0), coordinates from rng.child(1).
  Srht(Index input_dim, Index output_dim, RngStream rng);
  Srht(Index input_dim, std::vector<std::int8_t> signs, std::vector<Index> coords);

  Index input_dim() const { return input_dim_; }
  Index padded_dim() const { return signs_.size(); }
  Index output_dim() const { return coords_.size(); }
  const std::vector<std::int8_t>& signs() const { return signs_; }
  const std::vector<Index>& coords() const { return coords_; }

  DenseMatrix apply(const DenseMatrix& x) const;
  Vector apply(const Vector& x) const;

 private:
  Index input_dim_;
  std::vector<std::int8_t> signs_;
  std::vector<Index> coords_;
};

/// q SRHTs S^(c) = (1/sqrt(m)) P_c H D sharing the sign vector D, with
/// independent coordinate samples P_c. Member c draws its coordinates from
/// rng.child(1 + c), so a one-member family coincides with Srht(d, m, rng).
class SharedSignSrhtFamily {
 public:
  SharedSignSrhtFamily(Index members, Index input_dim, Index output_dim, RngStream rng);

  Index members() const { return coords_.size(); }
  Index input_dim() const { return input_dim_; }
  Index padded_dim() const { return signs_.size(); }
  Index output_dim() const { return output_dim_; }
  const std::vector<std::int8_t>& signs() const { return signs_; }
  const std::vector<Index>& coords(Index member) const { return coords_.at(member); }

  /// Member c as a standalone transform.
  Srht member(Index c) const;

  /// S^(1) X, ..., S^(q) X with a single Hadamard transform per column.
  std::vector<DenseMatrix> apply_all(const DenseMatrix& x) const;

 private:
  Index input_dim_;
  Index output_dim_;
  std::vector<std::int8_t> signs_;
  std::vector<std::vector<Index>> coords_;
};

// ---------------------------------------------------------------------------
// Gaussian JL

/// Unnormalized i.i.d. standard normal projection H in R^{rows x cols};
/// column c is drawn from rng.child(c).
class GaussianJl {
 public:
  GaussianJl(Index rows, Index cols, RngStream rng);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  DenseMatrix matrix() const;
  /// H * A, for A with cols() rows.
  DenseMatrix apply(const DenseMatrix& a) const;

 private:
  Index rows_;
  Index cols_;
  RngStream rng_;
};

}  // namespace tensorlev
