#include <doctest.h>

#include "tensorlev/kernels.hpp"
#include "tensorlev/oracle.hpp"
#include "test_util.hpp"

#include <numbers>

using namespace tensorlev;
using std::numbers::pi;
using testutil::random_matrix;

TEST_CASE("gpk kernel special cases") {
  const DenseMatrix x = random_matrix(3, 4, RngStream(1));
  GpkSpec c{Vector::Ones(1), Vector::Ones(4), x, false};
  CHECK(gpk_kernel_exact(c).isOnes());
  Vector lin(2);
  lin << 0, 1;
  GpkSpec l{lin, Vector::Ones(4), x, false};
  CHECK((gpk_kernel_exact(l) - x.transpose() * x).norm() < 1e-12);
  Vector a(3);
  a << 1, 1, 1 / std::sqrt(2.0);
  GpkSpec g{a, Vector::LinSpaced(4, 0.5, 2.0), x, false};
  const DenseMatrix phi = materialize_phi(g.descriptor()).phi;
  CHECK((gpk_kernel_exact(g) - phi.transpose() * phi).norm() < 1e-9);
}

TEST_CASE("gaussian truncation degree") {
  CHECK(gaussian_truncation_degree(1.0, 10, 0.5, 1.0) == 4);
  CHECK(gaussian_truncation_degree(0.0, 10, 0.5, 1.0) == 0);
  CHECK_THROWS_AS(gaussian_truncation_degree(1.0, 10, 0.0, 1.0), ConfigError);
}

TEST_CASE("gaussian gpk spec") {
  const DenseMatrix x = 0.4 * random_matrix(5, 20, RngStream(2));
  auto spec = gaussian_gpk_spec(x, 0.5, 1.0);
  CHECK(spec.alpha(2) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(spec.v(3) == doctest::Approx(std::exp(-0.5 * x.col(3).squaredNorm())));
  const double err = (gpk_kernel_exact(spec) - gaussian_kernel_exact(x)).norm();
  CHECK(err <= 0.5 * 1.0 / 4);
}

TEST_CASE("ntk coefficients") {
  CHECK(ntk_taylor_coeff(0) == doctest::Approx(1 / pi));
  CHECK(ntk_taylor_coeff(1) == 1.0);
  CHECK(ntk_taylor_coeff(3) == 0.0);
  CHECK(ntk_taylor_coeff(2) == doctest::Approx(3 / (2 * pi)));
  for (Index j = 0; j < 200; ++j) CHECK(ntk_taylor_coeff(j) >= 0.0);
  CHECK(std::isfinite(ntk_taylor_coeff(4000)));
  auto series = [](double beta, Index terms) {
    double s = 0;
    for (Index j = 0; j <= terms; ++j) s += ntk_taylor_coeff(j) * std::pow(beta, static_cast<double>(j));
    return s;
  };
  for (double beta : {-0.5, 0.0, 0.5}) CHECK(std::abs(series(beta, 50) - k_ntk(beta)) <= 1e-6);
  // At |beta| = 0.9 fifty terms leave a tail of about 1.29e-5; the series
  // still converges to the closed form.
  for (double beta : {-0.9, 0.9}) {
    CHECK(std::abs(series(beta, 50) - k_ntk(beta)) == doctest::Approx(1.28837e-5).epsilon(1e-4));
    CHECK(std::abs(series(beta, 400) - k_ntk(beta)) <= 1e-12);
  }
  CHECK(k_ntk(1.0) == 2.0);
  CHECK(std::abs(k_ntk(-1.0)) < 1e-15);
  for (double b = -1.0; b <= 1.0; b += 0.01) CHECK(k_ntk(b) <= 2.0 + 1e-15);
}

TEST_CASE("ntk gpk spec") {
  const DenseMatrix e = DenseMatrix::Identity(3, 1);
  auto one = ntk_gpk_spec(e, 0.5, 1.0);
  CHECK(gpk_kernel_exact(one)(0, 0) == doctest::Approx(2.0).epsilon(0.125));

  const DenseMatrix orth = DenseMatrix::Identity(3, 2);
  auto o = ntk_gpk_spec_with_degree(orth, 6);
  CHECK(gpk_kernel_exact(o)(0, 1) == doctest::Approx(1 / pi));

  DenseMatrix x = random_matrix(5, 8, RngStream(3));
  x = x * x.colwise().norm().cwiseInverse().asDiagonal();
  auto spec = ntk_gpk_spec(x, 0.5, 1.0);
  CHECK(x.squaredNorm() * ntk_tail(spec.degree()) <= 0.125);
  CHECK((gpk_kernel_exact(spec) - ntk_kernel_exact(x)).norm() <= 0.125);
  CHECK_THROWS_AS(ntk_gpk_spec(DenseMatrix::Zero(3, 2), 0.5, 1.0), DataError);
}

TEST_CASE("exact kernels") {
  DenseMatrix two(3, 2);
  two << 0, 1, 0, 0, 0, 0;
  const DenseMatrix g = gaussian_kernel_exact(two);
  CHECK(g(0, 0) == 1.0);
  CHECK(g(0, 1) == doctest::Approx(std::exp(-0.5)));
  const DenseMatrix x = random_matrix(4, 5, RngStream(4));
  const DenseMatrix k = ntk_kernel_exact(x);
  for (Eigen::Index i = 0; i < 5; ++i) CHECK(k(i, i) == doctest::Approx(2 * x.col(i).squaredNorm()));
  CHECK((k - k.transpose()).norm() < 1e-12);
  CHECK((ntk_kernel(x, x) - k).norm() < 1e-6);
}

TEST_CASE("statistical dimension") {
  CHECK(statistical_dimension(DenseMatrix::Identity(6, 6), 1.0) == doctest::Approx(3.0));
  const DenseMatrix a = random_matrix(6, 6, RngStream(5));
  const DenseMatrix k = a * a.transpose();
  CHECK(statistical_dimension(k, 1e9 * k.norm()) < 1e-3);
  const double direct = (k * (k + 0.7 * DenseMatrix::Identity(6, 6)).inverse()).trace();
  CHECK(statistical_dimension(k, 0.7) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("gpk spec json round trip") {
  GpkSpec s{Vector::LinSpaced(3, 0.1, 0.3), Vector::LinSpaced(4, 1, 2), DenseMatrix(), true};
  auto t = gpk_spec_from_json(gpk_spec_to_json(s));
  CHECK(t.alpha == s.alpha);
  CHECK(t.v == s.v);
  CHECK(t.normalized);
  CHECK_THROWS_AS(gpk_spec_from_json("{"), DataError);
  CHECK_THROWS_AS(gpk_spec_from_json(R"({"degree":5,"alpha":[1],"v":[],"normalized":false})"), DataError);
}
