#include <doctest.h>

#include "tensorlev/kernels.hpp"
#include "tensorlev/oracle.hpp"
#include "tensorlev/recursive.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace tensorlev;
using testutil::random_matrix;

TEST_CASE("sample and level counts") {
  CHECK(sample_count(4.0, 8.0, 0.5, 64) == 768);
  CHECK(sample_count(1.0, 1.0, 0.9, 2) == 2);
  CHECK(level_count(8.0, 1.0) == 3);
  CHECK(level_count(9.0, 1.0) == 4);
  CHECK(level_count(1.5, 1.0) == 1);
  CHECK(level_count(1.0, 1.0) == 0);
  CHECK(level_count(1.0, 2.0) == 0);
}

TEST_CASE("spectral check examples") {
  const DenseMatrix z0 = random_matrix(5, 6, RngStream(1));
  const DenseMatrix k = z0.transpose() * z0;
  for (double eps : {0.01, 0.5, 0.9}) {
    const auto c = spectral_check(k, z0, 0.3, eps);
    CHECK(c.pass);
    CHECK(c.max_dev < 1e-10);
  }
  const auto zero = spectral_check(k * 100.0, DenseMatrix::Zero(1, 6), 0.1, 0.5);
  CHECK_FALSE(zero.pass);
  CHECK(zero.min_eig < 1.0 / 1.5);

  // Z^T Z = (1 + eps/2) K with lambda large: eigenvalues of W lie in [1, 1 + eps/2).
  const double eps = 0.4;
  const DenseMatrix scaled = std::sqrt(1.0 + eps / 2.0) * z0;
  const auto c = spectral_check(k, scaled, 100.0 * k.norm(), eps);
  CHECK(c.pass);
  CHECK(c.min_eig >= 1.0 - 1e-12);
  CHECK(c.max_eig < 1.0 + eps / 2.0);

  // Direct eigenvalue computation of the same W.
  const DenseMatrix kk = k + DenseMatrix::Identity(6, 6);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> ek(kk);
  const DenseMatrix r = ek.operatorInverseSqrt();
  DenseMatrix zz = scaled.transpose() * scaled + DenseMatrix::Identity(6, 6);
  const Vector ev = Eigen::SelfAdjointEigenSolver<DenseMatrix>(r * zz * r).eigenvalues();
  const auto direct = spectral_check(k, scaled, 1.0, eps);
  CHECK(direct.min_eig == doctest::Approx(ev(0)).epsilon(1e-9));
  CHECK(direct.max_eig == doctest::Approx(ev(5)).epsilon(1e-9));

  DenseMatrix asym = k;
  asym(0, 1) += 1.0;
  CHECK_THROWS_AS(spectral_check(asym, z0, 1.0, 0.5), ContractViolation);
}

TEST_CASE("one level unrolls to a single sampler call") {
  const DenseMatrix x = random_matrix(4, 10, RngStream(2));
  const auto desc = FeatureDescriptor::self_tensor(Dataset(x), 2);
  SamplerRunConfig cfg;
  cfg.eps = 0.5;
  cfg.lambda = desc.frobenius_sq() / cfg.eps / 1.5;
  cfg.mu = 2.0;
  cfg.seed = 9;
  const auto res = recursive_leverage_sample(desc, cfg);
  REQUIRE(res.levels.size() == 1);
  CHECK_FALSE(res.degenerate);
  const DenseMatrix b = DenseMatrix::Zero(1, 10);
  const auto direct = row_sampler(desc, b, res.lambda0, res.s, cfg.row, RngStream(9).child(1));
  REQUIRE(direct.size() == res.rows.size());
  for (Index l = 0; l < direct.size(); ++l) {
    CHECK(direct[l].index == res.rows[l].index);
    CHECK(direct[l].weight == res.rows[l].weight);
  }
  CHECK((materialize_sampled_rows(direct, desc) - res.sketch).norm() == 0.0);
}

TEST_CASE("lambda at or above lambda0 runs one degenerate level") {
  const DenseMatrix x = random_matrix(3, 6, RngStream(3));
  const auto desc = FeatureDescriptor::self_tensor(Dataset(x), 2);
  SamplerRunConfig cfg;
  cfg.lambda = 10.0 * desc.frobenius_sq() / cfg.eps;
  const auto res = recursive_leverage_sample(desc, cfg);
  CHECK(res.degenerate);
  CHECK(res.levels.size() == 1);
  CHECK(res.last_level_lambda == res.lambda0);
}

TEST_CASE("levels halve the regularizer and the output has s rows") {
  const DenseMatrix x = random_matrix(5, 12, RngStream(4));
  const auto desc = FeatureDescriptor::tensor_product({Dataset(x), Dataset(DenseMatrix(random_matrix(3, 12, RngStream(5))))});
  SamplerRunConfig cfg;
  cfg.lambda = 0.37;
  cfg.mu = 3.0;
  const auto res = recursive_leverage_sample(desc, cfg);
  CHECK(res.lambda0 == doctest::Approx(desc.frobenius_sq() / cfg.eps));
  CHECK(res.levels.size() == level_count(res.lambda0, cfg.lambda));
  for (Index t = 0; t < res.levels.size(); ++t)
    CHECK(res.levels[t].lambda == doctest::Approx(res.lambda0 / std::pow(2.0, static_cast<double>(t))));
  CHECK(res.last_level_lambda > cfg.lambda);
  CHECK(res.last_level_lambda <= 2.0 * cfg.lambda);
  CHECK(res.rows.size() == res.s);
  CHECK(res.sketch.rows() == static_cast<Eigen::Index>(res.s));
  CHECK(res.sketch.cols() == 12);

  const auto again = recursive_leverage_sample(desc, cfg);
  CHECK((again.sketch - res.sketch).norm() == 0.0);
  cfg.seed = 1;
  CHECK((recursive_leverage_sample(desc, cfg).sketch - res.sketch).norm() > 0.0);
}

TEST_CASE("recursive sampling yields a spectral approximation") {
  const DenseMatrix x = random_matrix(4, 24, RngStream(6)) / 2.0;
  const auto desc = FeatureDescriptor::self_tensor(Dataset(x), 2);
  const DenseMatrix k = polynomial_kernel(x, x, 2);
  SamplerRunConfig cfg;
  cfg.eps = 0.5;
  cfg.lambda = 1.0;
  cfg.mu = std::max(1.0, statistical_dimension(k, cfg.lambda));
  int pass = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    const auto res = recursive_leverage_sample(desc, cfg);
    pass += spectral_check(k, res.sketch, cfg.lambda, cfg.eps).pass;
  }
  CHECK(pass >= 4);
}

TEST_CASE("run config validation") {
  const auto desc = FeatureDescriptor::self_tensor(Dataset(DenseMatrix(random_matrix(3, 5, RngStream(7)))), 2);
  SamplerRunConfig cfg;
  cfg.eps = 1.0;
  CHECK_THROWS_AS(recursive_leverage_sample(desc, cfg), ConfigError);
  cfg.eps = 0.5;
  cfg.lambda = -1.0;
  CHECK_THROWS_AS(recursive_leverage_sample(desc, cfg), ConfigError);
  cfg.lambda = 1.0;
  cfg.mu = 0.5;
  CHECK_THROWS_AS(recursive_leverage_sample(desc, cfg), ConfigError);
  cfg.mu = 1.0;
  cfg.lambda = 1e-30;
  cfg.ratio_cap = 1e6;
  CHECK_THROWS_AS(recursive_leverage_sample(desc, cfg), ConfigError);
  const auto zero = FeatureDescriptor::self_tensor(Dataset(DenseMatrix(DenseMatrix::Zero(3, 5))), 2);
  CHECK_THROWS_AS(recursive_leverage_sample(zero, SamplerRunConfig{}), NumericalError);
}
