#include "tensorlev/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tensorlev {

// ---------------------------------------------------------------------------
// CountSketch

CountSketch::CountSketch(Index input_dim, Index output_dim, RngStream rng)
    : hash_(input_dim), signs_(input_dim), output_dim_(output_dim) {
  require(output_dim >= 1, "CountSketch: output dimension must be positive");
  RngStream hs = rng.child(0);
  RngStream ss = rng.child(1);
  for (Index i = 0; i < input_dim; ++i) {
    hash_[i] = static_cast<std::uint32_t>(hs.below(output_dim));
    signs_[i] = static_cast<std::int8_t>(ss.sign());
  }
}

CountSketch::CountSketch(std::vector<std::uint32_t> hash, std::vector<std::int8_t> signs,
                         Index output_dim)
    : hash_(std::move(hash)), signs_(std::move(signs)), output_dim_(output_dim) {
  require(hash_.size() == signs_.size(), "CountSketch: hash/sign length mismatch");
  for (auto h : hash_) require(h < output_dim_, "CountSketch: hash value out of range");
  for (auto s : signs_) require(s == 1 || s == -1, "CountSketch: signs must be +-1");
}

Vector CountSketch::apply(const Vector& x) const {
  require(static_cast<Index>(x.size()) == input_dim(),
          "CountSketch: input has " + std::to_string(x.size()) + " entries, expected " +
              std::to_string(input_dim()));
  Vector out = Vector::Zero(static_cast<Eigen::Index>(output_dim_));
  apply_into(x.data(), out.data());
  return out;
}

DenseMatrix CountSketch::apply(const DenseMatrix& x) const {
  require(static_cast<Index>(x.rows()) == input_dim(), "CountSketch: row count mismatch");
  DenseMatrix out = DenseMatrix::Zero(static_cast<Eigen::Index>(output_dim_), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) apply_into(x.col(c).data(), out.col(c).data());
  return out;
}

void CountSketch::apply_into(const double* x, double* out) const {
  std::fill(out, out + output_dim_, 0.0);
  for (Index i = 0; i < hash_.size(); ++i) {
    if (x[i] != 0.0) out[hash_[i]] += signs_[i] * x[i];
  }
}

void CountSketch::apply_column(const SparseColMatrix& x, Index col, double* out) const {
  std::fill(out, out + output_dim_, 0.0);
  for (SparseColMatrix::InnerIterator it(x, static_cast<Eigen::Index>(col)); it; ++it) {
    const auto i = static_cast<Index>(it.row());
    out[hash_[i]] += signs_[i] * it.value();
  }
}

void CountSketch::apply_e1(double* out) const {
  std::fill(out, out + output_dim_, 0.0);
  out[hash_[0]] += signs_[0] * 1.0;
}

// ---------------------------------------------------------------------------
// TensorSketch2

TensorSketch2::TensorSketch2(Index dim, RngStream rng)
    : dim_(dim), left_(dim, dim, rng.child(0)), right_(dim, dim, rng.child(1)), fft_(dim) {}

TensorSketch2::TensorSketch2(CountSketch left, CountSketch right)
    : dim_(left.output_dim()), left_(std::move(left)), right_(std::move(right)), fft_(dim_) {
  require(left_.input_dim() == dim_ && right_.input_dim() == dim_ && right_.output_dim() == dim_,
          "TensorSketch2: inner CountSketches must be square of equal size");
}

void TensorSketch2::left_spectrum(const double* a, std::complex<double>* spec,
                                  double* scratch) const {
  left_.apply_into(a, scratch);
  fft_.forward(scratch, spec);
}

void TensorSketch2::right_spectrum(const double* b, std::complex<double>* spec,
                                   double* scratch) const {
  right_.apply_into(b, scratch);
  fft_.forward(scratch, spec);
}

void TensorSketch2::combine(const std::complex<double>* fa, const std::complex<double>* fb,
                            std::complex<double>* scratch, double* out) const {
  const Index half = dim_ / 2 + 1;
  for (Index k = 0; k < half; ++k) scratch[k] = fa[k] * fb[k];
  fft_.inverse(scratch, out);
  const double inv = 1.0 / static_cast<double>(dim_);
  for (Index k = 0; k < dim_; ++k) out[k] *= inv;
}

Vector TensorSketch2::apply(const Vector& a, const Vector& b) const {
  require(static_cast<Index>(a.size()) == dim_ && static_cast<Index>(b.size()) == dim_,
          "TensorSketch2: operand length mismatch");
  const Index half = dim_ / 2 + 1;
  Spectrum fa(half), fb(half), tmp(half);
  Vector scratch(static_cast<Eigen::Index>(dim_));
  left_spectrum(a.data(), fa.data(), scratch.data());
  right_spectrum(b.data(), fb.data(), scratch.data());
  Vector out(static_cast<Eigen::Index>(dim_));
  combine(fa.data(), fb.data(), tmp.data(), out.data());
  return out;
}

// ---------------------------------------------------------------------------
// PolySketchTree

PolySketchTree::PolySketchTree(std::vector<Index> factor_dims, Index sketch_dim, RngStream rng)
    : factor_dims_(std::move(factor_dims)), padded_(next_pow2(factor_dims_.size())),
      dim_(sketch_dim) {
  require(!factor_dims_.empty(), "PolySketchTree: degree must be positive");
  require(sketch_dim >= 1, "PolySketchTree: sketch dimension must be positive");
  leaves_.reserve(padded_);
  for (Index j = 0; j < padded_; ++j) {
    const Index in = j < factor_dims_.size() ? factor_dims_[j] : 1;
    require(in >= 1, "PolySketchTree: factor dimension must be positive");
    leaves_.emplace_back(in, dim_, rng.child({0, j}));
  }
  nodes_.reserve(padded_ - 1);
  for (Index u = 1; u < padded_; ++u) nodes_.emplace_back(dim_, rng.child({1, u}));
}

Index PolySketchTree::dimension_for(Index degree, double eps, double c_ps) {
  require(eps > 0.0, "PolySketch: eps must be positive");
  return static_cast<Index>(std::ceil(c_ps * static_cast<double>(degree) / (eps * eps)));
}

void PolySketchTree::sweep(const LeafFn& sketch_leaf, const EmitFn& emit, bool full) const {
  const Index q = degree();
  const Index half = dim_ / 2 + 1;
  std::vector<double> values(2 * padded_ * dim_);
  auto node = [&](Index u) { return values.data() + u * dim_; };
  std::vector<std::complex<double>> lspec(padded_ * half), rspec(padded_ * half), tmp(half);
  std::vector<double> scratch(dim_);

  auto eval_node = [&](Index u) {
    nodes_[u - 1].combine(lspec.data() + u * half, rspec.data() + u * half, tmp.data(), node(u));
  };

  for (Index j = 0; j < padded_; ++j) {
    if (j < q) {
      sketch_leaf(j, leaves_[j], node(padded_ + j));
    } else {
      leaves_[j].apply_e1(node(padded_ + j));
    }
  }
  for (Index u = padded_ - 1; u >= 1; --u) {
    nodes_[u - 1].left_spectrum(node(2 * u), lspec.data() + u * half, scratch.data());
    nodes_[u - 1].right_spectrum(node(2 * u + 1), rspec.data() + u * half, scratch.data());
    eval_node(u);
  }
  emit(0, node(1));
  if (!full) return;

  for (Index j = 0; j < q; ++j) {
    Index child = padded_ + j;
    leaves_[j].apply_e1(node(child));
    for (Index u = child / 2; u >= 1; child = u, u /= 2) {
      if (child == 2 * u) {
        nodes_[u - 1].left_spectrum(node(child), lspec.data() + u * half, scratch.data());
      } else {
        nodes_[u - 1].right_spectrum(node(child), rspec.data() + u * half, scratch.data());
      }
      eval_node(u);
    }
    emit(j + 1, node(1));
  }
}

namespace {

void check_factors(const PolySketchTree& tree, std::span<const Vector> factors) {
  require(factors.size() == tree.degree(),
          "PolySketch: expected " + std::to_string(tree.degree()) + " factors, got " +
              std::to_string(factors.size()));
  for (Index j = 0; j < factors.size(); ++j) {
    require(static_cast<Index>(factors[j].size()) == tree.factor_dims()[j],
            "PolySketch: factor " + std::to_string(j) + " has wrong dimension");
  }
}

}  // namespace

Vector PolySketchTree::apply(std::span<const Vector> factors) const {
  check_factors(*this, factors);
  Vector out(static_cast<Eigen::Index>(dim_));
  sweep([&](Index j, const CountSketch& leaf, double* o) { leaf.apply_into(factors[j].data(), o); },
        [&](Index, const double* v) { std::copy(v, v + dim_, out.data()); }, false);
  return out;
}

std::vector<Vector> PolySketchTree::prefix_sweep(std::span<const Vector> factors) const {
  check_factors(*this, factors);
  std::vector<Vector> out(degree() + 1, Vector(static_cast<Eigen::Index>(dim_)));
  sweep([&](Index j, const CountSketch& leaf, double* o) { leaf.apply_into(factors[j].data(), o); },
        [&](Index j, const double* v) { std::copy(v, v + dim_, out[j].data()); }, true);
  return out;
}

// ---------------------------------------------------------------------------
// Hadamard

void fwht_inplace(std::span<double> v) {
  const Index n = v.size();
  require(is_pow2(n), "fwht: length " + std::to_string(n) + " is not a power of two");
  for (Index h = 1; h < n; h <<= 1) {
    for (Index i = 0; i < n; i += 2 * h) {
      for (Index j = i; j < i + h; ++j) {
        const double a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

namespace {

std::vector<std::int8_t> draw_signs(Index n, RngStream rng) {
  std::vector<std::int8_t> s(n);
  for (auto& x : s) x = static_cast<std::int8_t>(rng.sign());
  return s;
}

std::vector<Index> draw_coords(Index padded, Index m, RngStream rng) {
  auto raw = rng.sample_without_replacement(padded, m);
  return {raw.begin(), raw.end()};
}

// Y <- H D X (zero padded), one column at a time.
DenseMatrix hadamard_signed(const DenseMatrix& x, const std::vector<std::int8_t>& signs) {
  const auto padded = static_cast<Eigen::Index>(signs.size());
  DenseMatrix y = DenseMatrix::Zero(padded, x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) y(r, c) = signs[r] * x(r, c);
    fwht_inplace(std::span<double>(y.col(c).data(), signs.size()));
  }
  return y;
}

DenseMatrix gather_rows(const DenseMatrix& y, const std::vector<Index>& coords) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(coords.size()));
  DenseMatrix out(static_cast<Eigen::Index>(coords.size()), y.cols());
  for (Index i = 0; i < coords.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = scale * y.row(static_cast<Eigen::Index>(coords[i]));
  return out;
}

}  // namespace

Srht::Srht(Index input_dim, Index output_dim, RngStream rng)
    : input_dim_(input_dim), signs_(draw_signs(next_pow2(input_dim), rng.child(0))) {
  require(input_dim >= 1, "Srht: input dimension must be positive");
  require(output_dim >= 1 && output_dim <= signs_.size(),
          "Srht: output dimension must lie in [1, padded input dimension]");
  coords_ = draw_coords(signs_.size(), output_dim, rng.child(1));
}

Srht::Srht(Index input_dim, std::vector<std::int8_t> signs, std::vector<Index> coords)
    : input_dim_(input_dim), signs_(std::move(signs)), coords_(std::move(coords)) {
  require(signs_.size() == next_pow2(input_dim), "Srht: sign vector must have padded length");
  require(!coords_.empty(), "Srht: empty coordinate list");
  std::vector<Index> sorted = coords_;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end() &&
              sorted.back() < signs_.size(),
          "Srht: coordinates must be distinct and within the padded dimension");
}

DenseMatrix Srht::apply(const DenseMatrix& x) const {
  require(static_cast<Index>(x.rows()) == input_dim_,
          "Srht: input has " + std::to_string(x.rows()) + " rows, expected " +
              std::to_string(input_dim_));
  return gather_rows(hadamard_signed(x, signs_), coords_);
}

Vector Srht::apply(const Vector& x) const {
  DenseMatrix m = x;
  return apply(m).col(0);
}

SharedSignSrhtFamily::SharedSignSrhtFamily(Index members, Index input_dim, Index output_dim,
                                           RngStream rng)
    : input_dim_(input_dim), output_dim_(output_dim),
      signs_(draw_signs(next_pow2(input_dim), rng.child(0))) {
  require(members >= 1, "SharedSignSrhtFamily: need at least one member");
  require(input_dim >= 1, "SharedSignSrhtFamily: input dimension must be positive");
  require(output_dim >= 1 && output_dim <= signs_.size(),
          "SharedSignSrhtFamily: m = " + std::to_string(output_dim) +
              " exceeds padded dimension " + std::to_string(signs_.size()));
  coords_.reserve(members);
  for (Index c = 0; c < members; ++c)
    coords_.push_back(draw_coords(signs_.size(), output_dim, rng.child(1 + c)));
}

Srht SharedSignSrhtFamily::member(Index c) const { return Srht(input_dim_, signs_, coords_.at(c)); }

std::vector<DenseMatrix> SharedSignSrhtFamily::apply_all(const DenseMatrix& x) const {
  require(static_cast<Index>(x.rows()) == input_dim_, "SharedSignSrhtFamily: row count mismatch");
  const DenseMatrix y = hadamard_signed(x, signs_);
  std::vector<DenseMatrix> out;
  out.reserve(coords_.size());
  for (const auto& p : coords_) out.push_back(gather_rows(y, p));
  return out;
}

// ---------------------------------------------------------------------------
// GaussianJl

GaussianJl::GaussianJl(Index rows, Index cols, RngStream rng)
    : rows_(rows), cols_(cols), rng_(rng) {
  require(rows >= 1 && cols >= 1, "GaussianJl: empty shape");
}

DenseMatrix GaussianJl::matrix() const {
  DenseMatrix h(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (Index c = 0; c < cols_; ++c) {
    RngStream s = rng_.child(c);
    for (Index r = 0; r < rows_; ++r)
      h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s.normal();
  }
  return h;
}

DenseMatrix GaussianJl::apply(const DenseMatrix& a) const {
  require(static_cast<Index>(a.rows()) == cols_,
          "GaussianJl: input has " + std::to_string(a.rows()) + " rows, expected " +
              std::to_string(cols_));
  return matrix() * a;
}

}  // namespace tensorlev
