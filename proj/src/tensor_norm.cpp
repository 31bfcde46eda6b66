#include "tensorlev/tensor_norm.hpp"

#include "tensorlev/parallel.hpp"
#include "tensorlev/sketch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace tensorlev {

double lower_median(std::vector<double>& values) {
  require(!values.empty(), "median of an empty set");
  const auto k = static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), values.begin() + k, values.end());
  return values[static_cast<std::size_t>(k)];
}

Index TensorNormDs::default_repetitions(Index n) {
  return std::max<Index>(5, static_cast<Index>(std::ceil(2.0 * log2_of(n))));
}

Index TensorNormDs::srht_dim_for(double eps, const TensorNormConfig& cfg) {
  const double raw = std::ceil(cfg.srht_const * std::log2(1.0 / eps) / (eps * eps));
  Index m = std::max<Index>(1, static_cast<Index>(raw));
  if (cfg.srht_dim_cap > 0) m = std::min(m, cfg.srht_dim_cap);
  return m;
}

TensorNormDs TensorNormDs::build(const std::vector<Dataset>& inputs, double eps,
                                 const TensorNormConfig& cfg, RngStream rng) {
  require(!inputs.empty(), "TensorNormDs: need at least one input");
  require(eps > 0.0 && eps < 1.0, "TensorNormDs: eps must lie in (0, 1)");
  const Index n = inputs[0].cols();
  std::vector<Index> dims;
  for (const auto& x : inputs) {
    require(x.cols() == n, "TensorNormDs: inputs must share the column count");
    dims.push_back(x.rows());
  }
  TensorNormDs ds;
  ds.k_ = inputs.size();
  ds.n_ = n;
  ds.eps_ = eps;
  ds.poly_dim_ = PolySketchTree::dimension_for(ds.k_, eps, cfg.poly_const);
  if (cfg.poly_dim_cap > 0) ds.poly_dim_ = std::min(ds.poly_dim_, cfg.poly_dim_cap);
  // An SRHT wider than the padded PolySketch output adds nothing.
  ds.srht_dim_ = std::min(srht_dim_for(eps, cfg), next_pow2(ds.poly_dim_));
  const Index reps = cfg.repetitions > 0 ? cfg.repetitions : default_repetitions(n);
  ds.sketches_.resize(reps);

  parallel_for(reps, [&](Index i) {
    PolySketchTree tree(dims, ds.poly_dim_, rng.child({i, 0}));
    Srht outer(ds.poly_dim_, ds.srht_dim_, rng.child({i, 1}));
    std::vector<DenseMatrix> pre(ds.k_ + 1, DenseMatrix(static_cast<Eigen::Index>(ds.poly_dim_),
                                                        static_cast<Eigen::Index>(n)));
    for (Index col = 0; col < n; ++col) {
      tree.sweep(
          [&](Index j, const CountSketch& leaf, double* out) {
            inputs[j].sketch_column(leaf, col, out);
          },
          [&](Index j, const double* v) {
            std::copy(v, v + ds.poly_dim_, pre[j].col(static_cast<Eigen::Index>(col)).data());
          },
          true);
    }
    auto& row = ds.sketches_[i];
    row.reserve(ds.k_ + 1);
    for (auto& p : pre) row.push_back(outer.apply(p));
  });
  return ds;
}

const DenseMatrix& TensorNormDs::sketch(Index rep, Index prefix) const {
  require(rep < repetitions() && prefix <= k_, "TensorNormDs: sketch index out of range");
  return sketches_[rep][prefix];
}

namespace {

template <class Mat>
double query_impl(const std::vector<std::vector<DenseMatrix>>& sk, Index k, Index n,
                  const Mat& v, Index prefix) {
  require(prefix <= k, "TensorNormDs::query: prefix " + std::to_string(prefix) +
                           " out of range 0.." + std::to_string(k));
  require(static_cast<Index>(v.rows()) == n, "TensorNormDs::query: V has " +
                                                 std::to_string(v.rows()) + " rows, expected " +
                                                 std::to_string(n));
  std::vector<double> vals;
  vals.reserve(sk.size());
  for (const auto& rep : sk) vals.push_back((rep[prefix] * v).squaredNorm());
  return lower_median(vals);
}

}  // namespace

double TensorNormDs::query(const DenseMatrix& v, Index prefix) const {
  return query_impl(sketches_, k_, n_, v, prefix);
}

double TensorNormDs::query(const Vector& v, Index prefix) const {
  return query_impl(sketches_, k_, n_, v, prefix);
}

double TensorNormDs::query(const SparseColMatrix& v, Index prefix) const {
  return query_impl(sketches_, k_, n_, v, prefix);
}

std::size_t TensorNormDs::stored_bytes() const {
  return repetitions() * (k_ + 1) * srht_dim_ * n_ * sizeof(double);
}

bool TensorNormDs::operator==(const TensorNormDs& o) const {
  if (k_ != o.k_ || n_ != o.n_ || poly_dim_ != o.poly_dim_ || srht_dim_ != o.srht_dim_ ||
      eps_ != o.eps_ || sketches_.size() != o.sketches_.size())
    return false;
  for (Index i = 0; i < sketches_.size(); ++i)
    for (Index j = 0; j <= k_; ++j)
      if (sketches_[i][j] != o.sketches_[i][j]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Binary format: magic "TLTNDS\0\0", u64 version, u64 k, n, poly_dim, srht_dim,
// reps, f64 eps, then P_{i,j} column-major for i-major, j-minor order.

namespace {

constexpr char kMagic[8] = {'T', 'L', 'T', 'N', 'D', 'S', 0, 0};
constexpr std::uint64_t kVersion = 1;

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw DataError("TensorNormDs: truncated file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& out, double x) { put_u64(out, std::bit_cast<std::uint64_t>(x)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void TensorNormDs::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  put_u64(out, kVersion);
  for (Index v : {k_, n_, poly_dim_, srht_dim_, repetitions()}) put_u64(out, v);
  put_f64(out, eps_);
  for (const auto& rep : sketches_)
    for (const auto& p : rep)
      for (Eigen::Index t = 0; t < p.size(); ++t) put_f64(out, p.data()[t]);
  if (!out) throw DataError("TensorNormDs: write failed");
}

TensorNormDs TensorNormDs::load(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
    throw DataError("TensorNormDs: not a tensor-norm file");
  const auto version = get_u64(in);
  if (version != kVersion)
    throw DataError("TensorNormDs: unsupported version " + std::to_string(version));
  TensorNormDs ds;
  ds.k_ = get_u64(in);
  ds.n_ = get_u64(in);
  ds.poly_dim_ = get_u64(in);
  ds.srht_dim_ = get_u64(in);
  const Index reps = get_u64(in);
  ds.eps_ = get_f64(in);
  if (ds.k_ == 0 || reps == 0 || ds.srht_dim_ == 0 || ds.k_ > 64 || reps > (1u << 20) ||
      ds.srht_dim_ > (1u << 24) || ds.n_ > (Index{1} << 32))
    throw DataError("TensorNormDs: implausible header");
  ds.sketches_.assign(reps, {});
  for (auto& rep : ds.sketches_) {
    for (Index j = 0; j <= ds.k_; ++j) {
      DenseMatrix p(static_cast<Eigen::Index>(ds.srht_dim_), static_cast<Eigen::Index>(ds.n_));
      for (Eigen::Index t = 0; t < p.size(); ++t) p.data()[t] = get_f64(in);
      rep.push_back(std::move(p));
    }
  }
  return ds;
}

}  // namespace tensorlev
