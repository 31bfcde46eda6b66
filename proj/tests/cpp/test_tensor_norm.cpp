#include <doctest.h>

#include "tensorlev/tensor_norm.hpp"
#include "test_util.hpp"

#include <sstream>

using namespace tensorlev;
using testutil::kron_cols;
using testutil::random_matrix;

namespace {

double rel_err(double est, double exact) { return std::abs(est - exact) / exact; }

}  // namespace

TEST_CASE("single factor estimates the matrix product norm") {
  const DenseMatrix x = random_matrix(5, 4, RngStream(1));
  const DenseMatrix v = random_matrix(4, 3, RngStream(2));
  const double exact = (x * v).squaredNorm();
  int ok = 0;
  for (int s = 0; s < 200; ++s) {
    auto ds = TensorNormDs::build({Dataset(x)}, 0.5, {}, RngStream(s));
    ok += rel_err(ds.query(v, 0), exact) <= 0.5;
  }
  CHECK(ok >= 180);
}

TEST_CASE("two factors estimate the tensor product norm") {
  const DenseMatrix x1 = random_matrix(4, 3, RngStream(3));
  const DenseMatrix x2 = random_matrix(4, 3, RngStream(4));
  const DenseMatrix v = random_matrix(3, 2, RngStream(5));
  const double exact0 = (kron_cols(x1, x2) * v).squaredNorm();
  const double exact1 = (x2 * v).squaredNorm();
  const double eps = 0.25;
  int ok0 = 0, ok1 = 0;
  for (int s = 0; s < 200; ++s) {
    auto ds = TensorNormDs::build({Dataset(x1), Dataset(x2)}, eps, {}, RngStream(s));
    ok0 += rel_err(ds.query(v, 0), exact0) <= eps;
    ok1 += rel_err(ds.query(v, 1), exact1) <= eps;
  }
  CHECK(ok0 >= 180);
  CHECK(ok1 >= 180);
}

TEST_CASE("fully replaced prefix sees only column sums") {
  const DenseMatrix x1 = random_matrix(3, 5, RngStream(6));
  const DenseMatrix x2 = random_matrix(2, 5, RngStream(7));
  auto ds = TensorNormDs::build({Dataset(x1), Dataset(x2)}, 0.5, {}, RngStream(8));
  for (Index i = 0; i < ds.repetitions(); ++i) {
    const DenseMatrix& p = ds.sketch(i, 2);
    for (Eigen::Index c = 1; c < p.cols(); ++c) CHECK((p.col(c) - p.col(0)).norm() == 0.0);
  }
  // With identical columns, ||P V||^2 = ||P e||^2 * ||1^T V||^2 per repetition.
  const DenseMatrix v = random_matrix(5, 2, RngStream(9));
  const double col_sum_sq = v.colwise().sum().squaredNorm();
  std::vector<double> unit;
  for (Index i = 0; i < ds.repetitions(); ++i) unit.push_back(ds.sketch(i, 2).col(0).squaredNorm());
  CHECK(ds.query(v, 2) == doctest::Approx(lower_median(unit) * col_sum_sq).epsilon(1e-12));
}

TEST_CASE("query is homogeneous and vanishes on zero") {
  const DenseMatrix x = random_matrix(6, 7, RngStream(10));
  auto ds = TensorNormDs::build({Dataset(x), Dataset(x), Dataset(x)}, 0.5, {}, RngStream(11));
  const DenseMatrix v = random_matrix(7, 2, RngStream(12));
  for (Index j = 0; j <= 3; ++j) {
    CHECK(ds.query(DenseMatrix(DenseMatrix::Zero(7, 2)), j) == 0.0);
    const double base = ds.query(v, j);
    CHECK(ds.query(DenseMatrix(3.0 * v), j) == doctest::Approx(9.0 * base).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ds.query(v, 4), ContractViolation);
  CHECK_THROWS_AS(ds.query(DenseMatrix(DenseMatrix::Ones(6, 1)), 0), ContractViolation);
}

TEST_CASE("sparse and dense inputs and queries agree") {
  DenseMatrix x = random_matrix(6, 5, RngStream(13));
  x(0, 0) = x(3, 2) = x(5, 4) = 0.0;
  SparseColMatrix xs = x.sparseView();
  auto a = TensorNormDs::build({Dataset(x), Dataset(x)}, 0.5, {}, RngStream(14));
  auto b = TensorNormDs::build({Dataset(xs), Dataset(xs)}, 0.5, {}, RngStream(14));
  CHECK(a == b);
  Vector v = Vector::Zero(5);
  v(1) = 2.0;
  v(3) = -1.0;
  SparseColMatrix vs = DenseMatrix(v).sparseView();
  CHECK(a.query(v, 0) == doctest::Approx(a.query(vs, 0)).epsilon(1e-12));
}

TEST_CASE("build is deterministic, sized as configured, and round-trips") {
  const DenseMatrix x = random_matrix(4, 9, RngStream(15));
  TensorNormConfig cfg;
  cfg.repetitions = 3;
  cfg.srht_dim_cap = 16;
  auto a = TensorNormDs::build({Dataset(x), Dataset(x)}, 0.5, cfg, RngStream(16));
  auto b = TensorNormDs::build({Dataset(x), Dataset(x)}, 0.5, cfg, RngStream(16));
  CHECK(a == b);
  CHECK(a.repetitions() == 3);
  CHECK(a.poly_dim() == 80);
  CHECK(a.srht_dim() == 16);
  CHECK(a.stored_bytes() == 3 * 3 * 16 * 9 * 8);

  std::stringstream buf;
  a.save(buf);
  CHECK(buf.str().size() == 8 + 8 * 7 + a.stored_bytes());
  auto c = TensorNormDs::load(buf);
  CHECK(a == c);

  std::stringstream bad("not a file");
  CHECK_THROWS_AS(TensorNormDs::load(bad), DataError);
}

TEST_CASE("default repetitions and srht sizing") {
  CHECK(TensorNormDs::default_repetitions(4) == 5);
  CHECK(TensorNormDs::default_repetitions(64) == 12);
  TensorNormConfig cfg;
  CHECK(TensorNormDs::srht_dim_for(0.5, cfg) == 160);
  CHECK(TensorNormDs::srht_dim_for(0.01, cfg) == 4096);
}

TEST_CASE("more repetitions never fail more often") {
  const DenseMatrix x1 = random_matrix(5, 6, RngStream(17));
  const DenseMatrix x2 = random_matrix(5, 6, RngStream(18));
  const DenseMatrix v = random_matrix(6, 1, RngStream(19));
  const double exact = (kron_cols(x1, x2) * v).squaredNorm();
  TensorNormConfig cfg;
  cfg.poly_dim_cap = 12;
  cfg.srht_dim_cap = 8;
  int prev = 1 << 30;
  for (Index t : {1, 9, 25}) {
    cfg.repetitions = t;
    int fails = 0;
    for (int s = 0; s < 200; ++s) {
      auto ds = TensorNormDs::build({Dataset(x1), Dataset(x2)}, 0.5, cfg, RngStream(s));
      fails += rel_err(ds.query(v, 0), exact) > 0.5;
    }
    CAPTURE(t);
    CHECK(fails <= prev);
    prev = fails;
  }
}

TEST_CASE("lower median picks the lower middle element") {
  std::vector<double> a{4, 1, 3, 2};
  CHECK(lower_median(a) == 2.0);
  std::vector<double> b{5, 1, 3};
  CHECK(lower_median(b) == 3.0);
}
