#include <doctest.h>

#include "tensorlev/kernels.hpp"
#include "tensorlev/oracle.hpp"
#include "test_util.hpp"

using namespace tensorlev;
using testutil::kron_cols;
using testutil::random_matrix;

TEST_CASE("identity basis columns tensor to basis vectors") {
  auto phi = materialize_phi(FeatureDescriptor::self_tensor(Dataset(DenseMatrix::Identity(2, 2)), 2));
  DenseMatrix want(4, 2);
  want << 1, 0, 0, 0, 0, 0, 0, 1;
  CHECK(phi.phi == want);
}

TEST_CASE("materialized tensor products match Kronecker columns") {
  const DenseMatrix a = random_matrix(3, 4, RngStream(1));
  const DenseMatrix b = random_matrix(2, 4, RngStream(2));
  const DenseMatrix c = random_matrix(3, 4, RngStream(3));
  auto phi = materialize_phi(FeatureDescriptor::tensor_product({Dataset(a), Dataset(b), Dataset(c)}));
  CHECK((phi.phi - kron_cols(kron_cols(a, b), c)).norm() < 1e-12);
  auto self = materialize_phi(FeatureDescriptor::self_tensor(Dataset(a), 3));
  CHECK((self.phi - kron_cols(kron_cols(a, a), a)).norm() < 1e-12);
}

TEST_CASE("tensor reshaping moves a factor across the product") {
  // Entry ((i,j),k) of (A ⊗ B) C^T equals entry (i,(j,k)) of A (B ⊗ C)^T.
  for (int s = 0; s < 5; ++s) {
    const DenseMatrix a = random_matrix(2, 2, RngStream(10 + s));
    const DenseMatrix b = random_matrix(2, 2, RngStream(20 + s));
    const DenseMatrix c = random_matrix(2, 2, RngStream(30 + s));
    const DenseMatrix left = kron_cols(a, b) * c.transpose();
    const DenseMatrix right = a * kron_cols(b, c).transpose();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) CHECK(left(i * 2 + j, k) == doctest::Approx(right(i, j * 2 + k)));
  }
}

TEST_CASE("gpk layout puts degree blocks in order") {
  const DenseMatrix x = random_matrix(3, 5, RngStream(4));
  Vector alpha(2);
  alpha << 1, 1;
  auto phi = materialize_phi(FeatureDescriptor::gpk(Dataset(x), Vector::Ones(5), alpha));
  REQUIRE(phi.phi.rows() == 4);
  CHECK(phi.phi.row(0).isOnes());
  CHECK((phi.phi.bottomRows(3) - x).norm() == 0.0);

  Vector a3(4);
  a3 << 0.5, 1.0, 2.0, 3.0;
  Vector v = Vector::LinSpaced(5, 0.5, 1.5);
  auto full = materialize_phi(FeatureDescriptor::gpk(Dataset(x), v, a3));
  CHECK(full.phi.rows() == 1 + 3 + 9 + 27);
  CHECK(full.codec.flat(2, {1, 2}) == 4 + 5);
  CHECK((full.phi.middleRows(4, 9) - 2.0 * kron_cols(x, x) * v.asDiagonal()).norm() < 1e-12);
}

TEST_CASE("row codec is a bijection with the first index most significant") {
  RowCodec c({2, 3, 4}, {0, 1, 2, 3});
  CHECK(c.rows() == 1 + 2 + 6 + 24);
  for (Index r = 0; r < c.rows(); ++r) {
    auto [b, idx] = c.decode(r);
    CHECK(c.flat(b, idx) == r);
  }
  RowCodec t({2, 3}, {2});
  CHECK(t.flat(2, {1, 0}) == 3);
  CHECK(t.flat(2, {0, 2}) == 2);
  CHECK_THROWS_AS(t.flat(1, {0}), ContractViolation);
}

TEST_CASE("materialize respects the cap") {
  const DenseMatrix x = random_matrix(8, 10, RngStream(5));
  CHECK_THROWS_AS(materialize_phi(FeatureDescriptor::self_tensor(Dataset(x), 4), 1000), ContractViolation);
}

TEST_CASE("ridge leverage scores") {
  Vector l = exact_ridge_leverage_scores(DenseMatrix::Identity(5, 5), 1.0);
  for (Eigen::Index i = 0; i < 5; ++i) CHECK(l(i) == doctest::Approx(0.5));

  const DenseMatrix phi = random_matrix(8, 3, RngStream(6));
  CHECK(exact_ridge_leverage_scores(phi, 1e-12).sum() == doctest::Approx(3.0).epsilon(1e-6));
  const DenseMatrix g = phi.transpose() * phi;
  const double direct = (g * (g + 0.3 * DenseMatrix::Identity(3, 3)).inverse()).trace();
  CHECK(exact_ridge_leverage_scores(phi, 0.3).sum() == doctest::Approx(direct).epsilon(1e-9));
  CHECK(statistical_dimension(g, 0.3) == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("row norm distribution") {
  Vector u = exact_row_norm_distribution(DenseMatrix::Identity(4, 4), DenseMatrix::Zero(1, 4), 2.0);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(u(i) == doctest::Approx(0.25));
  const DenseMatrix phi = random_matrix(7, 4, RngStream(7));
  const DenseMatrix b = random_matrix(3, 4, RngStream(8));
  Vector p = exact_row_norm_distribution(phi, b, 0.5);
  CHECK(std::abs(p.sum() - 1.0) < 1e-12);

  // Direct categorical sampling from the target distribution.
  RngStream r(9);
  std::vector<double> w(p.data(), p.data() + p.size());
  Vector counts = Vector::Zero(7);
  const int draws = 50000;
  for (int t = 0; t < draws; ++t) counts(static_cast<Eigen::Index>(sample_categorical(w, 1.0, r.uniform()))) += 1;
  for (Eigen::Index i = 0; i < 7; ++i) {
    const double sigma = std::sqrt(p(i) * (1 - p(i)) / draws);
    CHECK(std::abs(counts(i) / draws - p(i)) <= 3 * sigma + 1e-12);
  }
  CHECK_THROWS_AS(exact_row_norm_distribution(DenseMatrix::Zero(3, 2), DenseMatrix::Zero(1, 2), 1.0),
                  NumericalError);
}

TEST_CASE("total variation distance") {
  Vector p(2), q(2);
  p << 0.5, 0.5;
  q << 1.0, 0.0;
  CHECK(tv_distance(p, p) == 0.0);
  CHECK(tv_distance(p, q) == doctest::Approx(0.5));
  Vector a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  CHECK(tv_distance(a, b) == 1.0);
  CHECK_THROWS_AS(tv_distance(p, Vector::Ones(3) / 3.0), ContractViolation);
}

TEST_CASE("frobenius norm closed forms") {
  CHECK(FeatureDescriptor::self_tensor(Dataset(DenseMatrix::Identity(3, 1)), 5).frobenius_sq() == 1.0);
  Dataset eye(DenseMatrix(DenseMatrix::Identity(2, 2)));
  CHECK(FeatureDescriptor::tensor_product({eye, eye}).frobenius_sq() == 2.0);
  const DenseMatrix x = random_matrix(4, 6, RngStream(10));
  auto self = FeatureDescriptor::self_tensor(Dataset(x), 3);
  CHECK(self.frobenius_sq() == doctest::Approx(materialize_phi(self).phi.squaredNorm()).epsilon(1e-9));
  Vector alpha(3);
  alpha << 0.3, 1.2, 0.7;
  auto g = FeatureDescriptor::gpk(Dataset(x), Vector::LinSpaced(6, 0.2, 1.0), alpha);
  CHECK(g.frobenius_sq() == doctest::Approx(materialize_phi(g).phi.squaredNorm()).epsilon(1e-9));
}

TEST_CASE("materialized sampled rows agree with phi rows") {
  const DenseMatrix x1 = random_matrix(4, 3, RngStream(11));
  const DenseMatrix x2 = random_matrix(4, 3, RngStream(12));
  auto desc = FeatureDescriptor::tensor_product({Dataset(x1), Dataset(x2)});
  auto phi = materialize_phi(desc);
  SampledRows rows;
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) rows.push_back({2, {i, j}, 1.0, 1.0, false});
  CHECK((materialize_sampled_rows(rows, desc) - phi.phi).norm() < 1e-12);

  auto one = FeatureDescriptor::self_tensor(Dataset(x1), 1);
  SampledRows id;
  Vector w(4);
  w << 1.0, 2.0, 0.5, 3.0;
  for (Index i = 0; i < 4; ++i) id.push_back({1, {i}, w(static_cast<Eigen::Index>(i)), 1.0, false});
  CHECK((materialize_sampled_rows(id, one) - w.asDiagonal() * x1).norm() < 1e-12);

  auto zero = FeatureDescriptor::self_tensor(Dataset(DenseMatrix::Zero(4, 3)), 2);
  CHECK(materialize_sampled_rows(rows, zero).isZero());
  rows[0].index[0] = 9;
  CHECK_THROWS_AS(materialize_sampled_rows(rows, desc), ContractViolation);
}
