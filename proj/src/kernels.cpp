#include "tensorlev/kernels.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tensorlev {

FeatureDescriptor GpkSpec::descriptor() const { return FeatureDescriptor::gpk(Dataset(x), v, alpha); }

DenseMatrix gpk_kernel_exact(const GpkSpec& spec) {
  require(spec.alpha.size() >= 1, "GPK needs at least one coefficient");
  require(spec.v.size() == spec.x.cols(), "GPK scale vector length mismatch");
  const DenseMatrix g = spec.x.transpose() * spec.x;
  const auto n = g.rows();
  DenseMatrix power = DenseMatrix::Ones(n, n);
  DenseMatrix k = DenseMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < spec.alpha.size(); ++j) {
    k += spec.alpha(j) * spec.alpha(j) * power;
    power = power.cwiseProduct(g);
  }
  return spec.v.asDiagonal() * k * spec.v.asDiagonal();
}

Index gaussian_truncation_degree(double r, Index n, double eps, double lambda) {
  const double target = eps * lambda / (4.0 * static_cast<double>(n));
  if (!(target > 0.0)) throw ConfigError("Gaussian truncation target must be positive");
  require(r >= 0.0 && std::isfinite(r), "Gaussian truncation: radius must be finite");
  // tail(q) = sum_{l>q} r^l / l!, summed directly from the first omitted term.
  for (Index q = 0;; ++q) {
    double term = std::exp(static_cast<double>(q + 1) * std::log(r) -
                           std::lgamma(static_cast<double>(q + 2)));
    if (r == 0.0) term = 0.0;
    double tail = 0.0;
    for (Index l = q + 1; term > 0.0; ++l) {
      tail += term;
      if (static_cast<double>(l + 1) > r && term < 1e-18 * tail) break;
      term *= r / static_cast<double>(l + 1);
    }
    if (tail <= target) return q;
    if (q > 100000) throw ConfigError("Gaussian truncation degree exceeds 100000");
  }
}

GpkSpec gaussian_gpk_spec(const DenseMatrix& x, double eps, double lambda) {
  if (!(eps > 0.0) || !(lambda > 0.0)) throw ConfigError("eps and lambda must be positive");
  const Vector sq = x.colwise().squaredNorm().transpose();
  const double r = sq.size() ? sq.maxCoeff() : 0.0;
  const Index q = gaussian_truncation_degree(r, static_cast<Index>(x.cols()), eps, lambda);
  GpkSpec spec;
  spec.alpha.resize(static_cast<Eigen::Index>(q + 1));
  for (Index j = 0; j <= q; ++j)
    spec.alpha(static_cast<Eigen::Index>(j)) = std::exp(-0.5 * std::lgamma(static_cast<double>(j + 1)));
  spec.v = (-0.5 * sq.array()).exp();
  spec.x = x;
  spec.normalized = false;
  return spec;
}

double ntk_taylor_coeff(Index j) {
  using std::numbers::pi;
  if (j == 0) return 1.0 / pi;
  if (j == 1) return 1.0;
  if (j % 2 == 1) return 0.0;
  const double jd = static_cast<double>(j);
  const double log_c = std::log(jd + 1.0) + std::lgamma(jd - 1.0) - (jd - 2.0) * std::log(2.0) -
                       2.0 * std::lgamma(jd / 2.0) - std::log(jd - 1.0) - std::log(jd);
  return std::exp(log_c) / pi;
}

double k_ntk(double beta) {
  require(beta >= -1.0 - 1e-12 && beta <= 1.0 + 1e-12, "k_ntk: argument outside [-1, 1]");
  beta = std::clamp(beta, -1.0, 1.0);
  using std::numbers::pi;
  return (std::sqrt(std::max(0.0, 1.0 - beta * beta)) + 2.0 * beta * (pi - std::acos(beta))) / pi;
}

double ntk_tail(Index degree) {
  double s = 0.0;
  for (Index j = 0; j <= degree; ++j) s += ntk_taylor_coeff(j);
  return std::max(0.0, 2.0 - s);
}

namespace {

void unit_columns(const DenseMatrix& x, DenseMatrix& xhat, Vector& norms) {
  norms = x.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < norms.size(); ++c)
    if (!(norms(c) > 0.0)) throw DataError("NTK: column " + std::to_string(c) + " is zero");
  xhat = x * norms.cwiseInverse().asDiagonal();
}

}  // namespace

GpkSpec ntk_gpk_spec_with_degree(const DenseMatrix& x, Index degree) {
  GpkSpec spec;
  unit_columns(x, spec.x, spec.v);
  spec.alpha.resize(static_cast<Eigen::Index>(degree + 1));
  for (Index j = 0; j <= degree; ++j)
    spec.alpha(static_cast<Eigen::Index>(j)) = std::sqrt(ntk_taylor_coeff(j));
  spec.normalized = true;
  return spec;
}

GpkSpec ntk_gpk_spec(const DenseMatrix& x, double eps, double lambda, Index max_degree) {
  if (!(eps > 0.0) || !(lambda > 0.0)) throw ConfigError("eps and lambda must be positive");
  const double mass = x.squaredNorm();
  const double target = eps * lambda / 4.0;
  double partial = 0.0;
  Index degree = 0;
  for (;; ++degree) {
    partial += ntk_taylor_coeff(degree);
    if (mass * std::max(0.0, 2.0 - partial) <= target) break;
    if (degree >= max_degree)
      throw ConfigError("NTK truncation degree exceeds " + std::to_string(max_degree));
  }
  return ntk_gpk_spec_with_degree(x, degree);
}

DenseMatrix gaussian_kernel(const DenseMatrix& x, const DenseMatrix& y) {
  require(x.rows() == y.rows(), "kernel: dimension mismatch");
  const Vector nx = x.colwise().squaredNorm().transpose();
  const Vector ny = y.colwise().squaredNorm().transpose();
  DenseMatrix k = x.transpose() * y;
  for (Eigen::Index j = 0; j < k.cols(); ++j)
    for (Eigen::Index i = 0; i < k.rows(); ++i)
      k(i, j) = std::exp(-0.5 * std::max(0.0, nx(i) + ny(j) - 2.0 * k(i, j)));
  return k;
}

DenseMatrix gaussian_kernel_exact(const DenseMatrix& x) {
  DenseMatrix k = gaussian_kernel(x, x);
  k.diagonal().setOnes();
  return k;
}

DenseMatrix ntk_kernel(const DenseMatrix& x, const DenseMatrix& y) {
  require(x.rows() == y.rows(), "kernel: dimension mismatch");
  DenseMatrix xh, yh;
  Vector nx, ny;
  unit_columns(x, xh, nx);
  unit_columns(y, yh, ny);
  DenseMatrix k = xh.transpose() * yh;
  for (Eigen::Index j = 0; j < k.cols(); ++j)
    for (Eigen::Index i = 0; i < k.rows(); ++i)
      k(i, j) = nx(i) * ny(j) * k_ntk(std::clamp(k(i, j), -1.0, 1.0));
  return k;
}

DenseMatrix ntk_kernel_exact(const DenseMatrix& x) {
  DenseMatrix k = ntk_kernel(x, x);
  k.diagonal() = 2.0 * x.colwise().squaredNorm().transpose();
  return k;
}

DenseMatrix polynomial_kernel(const DenseMatrix& x, const DenseMatrix& y, Index q) {
  require(x.rows() == y.rows(), "kernel: dimension mismatch");
  return (x.transpose() * y).array().pow(static_cast<double>(q)).matrix();
}

double statistical_dimension(const DenseMatrix& k, double lambda) {
  require(k.rows() == k.cols(), "statistical_dimension: matrix must be square");
  require(lambda > 0.0, "statistical_dimension: lambda must be positive");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(k, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("statistical_dimension: eigensolver failed");
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double mu = std::max(0.0, es.eigenvalues()(i));
    s += mu / (mu + lambda);
  }
  return s;
}

std::string gpk_spec_to_json(const GpkSpec& spec) {
  nlohmann::json j;
  j["degree"] = spec.degree();
  j["alpha"] = std::vector<double>(spec.alpha.data(), spec.alpha.data() + spec.alpha.size());
  j["v"] = std::vector<double>(spec.v.data(), spec.v.data() + spec.v.size());
  j["normalized"] = spec.normalized;
  return j.dump();
}

GpkSpec gpk_spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("GPK spec: ") + e.what());
  }
  GpkSpec spec;
  try {
    auto a = j.at("alpha").get<std::vector<double>>();
    auto v = j.at("v").get<std::vector<double>>();
    spec.alpha = Eigen::Map<Vector>(a.data(), static_cast<Eigen::Index>(a.size()));
    spec.v = Eigen::Map<Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
    spec.normalized = j.at("normalized").get<bool>();
    if (j.at("degree").get<Index>() + 1 != a.size())
      throw DataError("GPK spec: degree does not match coefficient count");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("GPK spec: ") + e.what());
  }
  return spec;
}

}  // namespace tensorlev
