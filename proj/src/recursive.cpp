#include "tensorlev/recursive.hpp"

#include "tensorlev/log.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace tensorlev {

Index sample_count(double samples_const, double mu, double eps, Index n) {
  const double s = std::ceil(samples_const * mu / (eps * eps) * log2_of(n));
  return std::max<Index>(1, static_cast<Index>(s));
}

Index level_count(double lambda0, double lambda) {
  if (lambda >= lambda0) return 0;
  return static_cast<Index>(std::ceil(std::log2(lambda0 / lambda) - 1e-12));
}

RecursiveResult recursive_leverage_sample(const FeatureDescriptor& desc, const SamplerRunConfig& cfg) {
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
  if (!(cfg.lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (!(cfg.mu >= 1.0)) throw ConfigError("mu must be at least 1");
  const double frob = desc.frobenius_sq();
  if (!(frob > 0.0)) throw NumericalError("feature matrix is zero");
  if (frob / (cfg.eps * cfg.lambda) > cfg.ratio_cap)
    throw ConfigError("||Phi||_F^2 / (eps lambda) exceeds the configured cap");

  RecursiveResult res;
  const Index n = desc.columns();
  res.s = cfg.samples_override > 0 ? cfg.samples_override
                                   : sample_count(cfg.samples_const, cfg.mu, cfg.eps, n);
  res.lambda0 = frob / cfg.eps;
  Index levels = level_count(res.lambda0, cfg.lambda);
  if (levels == 0) {
    res.degenerate = true;
    levels = 1;
    log_message(LogLevel::Info, "lambda >= lambda0; running a single level at lambda0");
  }

  const RngStream root(cfg.seed);
  DenseMatrix b = DenseMatrix::Zero(1, static_cast<Eigen::Index>(n));
  double lam = res.lambda0;
  for (Index t = 1; t <= levels; ++t) {
    LevelRecord rec;
    rec.lambda = lam;
    const auto start = std::chrono::steady_clock::now();
    res.rows = row_sampler(desc, b, lam, res.s, cfg.row, root.child(t), &rec.report);
    b = materialize_sampled_rows(res.rows, desc);
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.last_level_lambda = lam;
    res.levels.push_back(std::move(rec));
    lam /= 2.0;
  }
  res.sketch = std::move(b);
  return res;
}

SpectralCheck spectral_check(const DenseMatrix& k, const DenseMatrix& z, double lambda, double eps) {
  require(k.rows() == k.cols(), "spectral_check: kernel must be square");
  require(z.cols() == k.cols(), "spectral_check: sketch column count mismatch");
  require(lambda > 0.0, "spectral_check: lambda must be positive");
  require(eps > 0.0 && eps < 1.0, "spectral_check: eps must lie in (0, 1)");
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  require((k - k.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale,
          "spectral_check: kernel is not symmetric");
  const auto n = k.rows();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> ek(k);
  if (ek.info() != Eigen::Success) throw NumericalError("spectral_check: eigensolver failed");
  const Vector d = (ek.eigenvalues().array() + lambda).max(lambda * 1e-300).rsqrt();
  const DenseMatrix r = ek.eigenvectors() * d.asDiagonal() * ek.eigenvectors().transpose();
  DenseMatrix inner = z.transpose() * z;
  inner.diagonal().array() += lambda;
  DenseMatrix w = r * inner * r;
  w = 0.5 * (w + w.transpose());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> ew(w, Eigen::EigenvaluesOnly);
  if (ew.info() != Eigen::Success) throw NumericalError("spectral_check: eigensolver failed");
  SpectralCheck out;
  out.min_eig = ew.eigenvalues()(0);
  out.max_eig = ew.eigenvalues()(n - 1);
  const double slack = 1e-9;
  out.pass = out.min_eig >= 1.0 / (1.0 + eps) - slack && out.max_eig <= 1.0 / (1.0 - eps) + slack;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mu = ew.eigenvalues()(i);
    out.max_dev = std::max(out.max_dev, mu > 0.0 ? std::abs(1.0 - 1.0 / mu) : INFINITY);
  }
  return out;
}

}  // namespace tensorlev
