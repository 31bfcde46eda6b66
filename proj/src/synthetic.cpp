#include "tensorlev/synthetic.hpp"

#include <cmath>
#include <vector>

namespace tensorlev {

namespace {

DenseMatrix normals(Index d, Index n, RngStream rng) {
  DenseMatrix x(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    RngStream col = rng.child(static_cast<std::uint64_t>(j));
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = col.normal();
  }
  return x;
}

Vector unit(Index d, RngStream rng) {
  Vector w = normals(d, 1, rng).col(0);
  return w / w.norm();
}

}  // namespace

DenseMatrix gaussian_cloud(Index d, Index n, double radius, RngStream rng) {
  require(d >= 1 && n >= 1, "gaussian_cloud: empty shape");
  require(radius > 0.0, "gaussian_cloud: radius must be positive");
  DenseMatrix x = normals(d, n, rng);
  const double top = std::sqrt(x.colwise().squaredNorm().maxCoeff());
  return x * (radius / top);
}

SparseColMatrix sparse_unit_cloud(Index d, Index n, Index k, RngStream rng) {
  require(d >= 1 && n >= 1 && k >= 1, "sparse_unit_cloud: empty shape");
  k = std::min(k, d);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(n * k);
  for (Index j = 0; j < n; ++j) {
    RngStream col = rng.child(j);
    const auto rows = col.sample_without_replacement(d, k);
    std::vector<double> vals(k);
    double norm = 0.0;
    for (auto& v : vals) {
      v = col.normal();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (Index t = 0; t < k; ++t)
      entries.emplace_back(static_cast<int>(rows[t]), static_cast<int>(j), vals[t] / norm);
  }
  SparseColMatrix x(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n));
  x.setFromTriplets(entries.begin(), entries.end());
  return x;
}

RegressionTask make_regression(Index d, Index n_train, Index n_test, double radius, double noise,
                               std::uint64_t seed) {
  const RngStream root(seed);
  const DenseMatrix all = gaussian_cloud(d, n_train + n_test, radius, root.child(0));
  const Vector w = unit(d, root.child(1));
  const Vector u = unit(d, root.child(2));
  RngStream eps = root.child(3);
  Vector y(all.cols());
  for (Eigen::Index j = 0; j < all.cols(); ++j) {
    const double a = w.dot(all.col(j)) / radius, b = u.dot(all.col(j)) / radius;
    y(j) = std::sin(2.0 * a) + 0.5 * std::cos(3.0 * b) + noise * eps.normal();
  }
  const auto nt = static_cast<Eigen::Index>(n_train);
  return {all.leftCols(nt), all.rightCols(all.cols() - nt), y.head(nt), y.tail(y.size() - nt)};
}

ClassificationTask make_classification(Index d, Index n_train, Index n_test, Index classes,
                                       double radius, std::uint64_t seed) {
  require(classes >= 2, "make_classification: need at least two classes");
  const RngStream root(seed);
  const DenseMatrix all = gaussian_cloud(d, n_train + n_test, radius, root.child(0));
  const DenseMatrix centers = gaussian_cloud(d, classes, radius, root.child(1));
  Vector y(all.cols());
  for (Eigen::Index j = 0; j < all.cols(); ++j) {
    Eigen::Index best;
    (centers.colwise() - all.col(j)).colwise().squaredNorm().minCoeff(&best);
    y(j) = static_cast<double>(best);
  }
  const auto nt = static_cast<Eigen::Index>(n_train);
  return {all.leftCols(nt), all.rightCols(all.cols() - nt), y.head(nt), y.tail(y.size() - nt)};
}

}  // namespace tensorlev
