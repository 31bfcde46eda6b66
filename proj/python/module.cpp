#include "tensorlev/common.hpp"
#include "tensorlev/features.hpp"
#include "tensorlev/kernels.hpp"
#include "tensorlev/krr.hpp"
#include "tensorlev/log.hpp"
#include "tensorlev/parallel.hpp"
#include "tensorlev/recursive.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <mutex>
#include <utility>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace tensorlev;

namespace {

// Library warnings are collected and returned with each result instead of
// going to stderr.
std::mutex g_warn_mu;
std::vector<std::string> g_warnings;

void collect_warning(LogLevel level, const std::string& msg) {
  if (level != LogLevel::Warning) return;
  std::lock_guard lock(g_warn_mu);
  if (std::find(g_warnings.begin(), g_warnings.end(), msg) == g_warnings.end()) g_warnings.push_back(msg);
}

std::vector<std::string> take_warnings() {
  std::lock_guard lock(g_warn_mu);
  return std::exchange(g_warnings, {});
}

// Datasets arrive as d x n arrays with one column per point.
FeatureDescriptor make_descriptor(const std::string& kernel, const std::vector<DenseMatrix>& xs, Index q,
                                  double eps, double lambda) {
  if (xs.empty()) throw ConfigError("at least one dataset is required");
  if (kernel == "tensor") {
    std::vector<Dataset> factors(xs.begin(), xs.end());
    return FeatureDescriptor::tensor_product(std::move(factors));
  }
  if (xs.size() != 1) throw ConfigError("kernel '" + kernel + "' takes a single dataset");
  if (kernel == "poly") return FeatureDescriptor::self_tensor(Dataset(xs[0]), q);
  if (kernel == "gaussian") return gaussian_gpk_spec(xs[0], eps, lambda).descriptor();
  if (kernel == "ntk")
    return (q > 0 ? ntk_gpk_spec_with_degree(xs[0], q) : ntk_gpk_spec(xs[0], eps, lambda, 1024)).descriptor();
  throw ConfigError("unknown kernel '" + kernel + "'");
}

py::dict sample(const std::string& kernel, const std::vector<DenseMatrix>& xs, Index q, double eps, double lambda,
                double mu, double samples_const, Index samples, std::uint64_t seed) {
  const FeatureDescriptor desc = make_descriptor(kernel, xs, q, eps, lambda);
  SamplerRunConfig cfg;
  cfg.eps = eps;
  cfg.lambda = lambda;
  cfg.mu = mu;
  cfg.samples_const = samples_const;
  cfg.samples_override = samples;
  cfg.seed = seed;
  take_warnings();
  RecursiveResult res;
  {
    py::gil_scoped_release release;
    res = recursive_leverage_sample(desc, cfg);
  }
  py::list rows;
  for (const auto& r : res.rows)
    rows.append(py::dict(py::arg("block") = r.block, py::arg("index") = r.index, py::arg("weight") = r.weight,
                         py::arg("prob") = r.prob, py::arg("fallback") = r.fallback));
  py::list levels;
  for (const auto& l : res.levels) levels.append(l.lambda);
  py::dict out;
  out["sketch"] = std::move(res.sketch);
  out["rows"] = rows;
  out["s"] = res.s;
  out["lambda0"] = res.lambda0;
  out["last_level_lambda"] = res.last_level_lambda;
  out["level_lambdas"] = levels;
  out["degenerate"] = res.degenerate;
  out["warnings"] = take_warnings();
  return out;
}

}  // namespace

PYBIND11_MODULE(_tensorlev, m) {
  m.doc() = "Ridge leverage score sampling for tensor product and polynomial kernels";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  set_log_sink(collect_warning);

  m.def("version", &version);
  m.def("set_thread_count", [](std::size_t n) { set_thread_count(n); }, py::arg("n"));
  m.def("thread_count", &thread_count);

  m.def("polynomial_kernel", &polynomial_kernel, py::arg("x"), py::arg("y"), py::arg("degree"));
  m.def("gaussian_kernel", &gaussian_kernel, py::arg("x"), py::arg("y"));
  m.def("ntk_kernel", &ntk_kernel, py::arg("x"), py::arg("y"));
  m.def("statistical_dimension", &statistical_dimension, py::arg("k"), py::arg("lam"));
  m.def("ntk_taylor_coeff", &ntk_taylor_coeff, py::arg("j"));

  m.def(
      "spectral_check",
      [](const DenseMatrix& k, const DenseMatrix& z, double lambda, double eps) {
        const auto c = spectral_check(k, z, lambda, eps);
        return py::dict(py::arg("pass") = c.pass, py::arg("max_dev") = c.max_dev,
                        py::arg("min_eig") = c.min_eig, py::arg("max_eig") = c.max_eig);
      },
      py::arg("k"), py::arg("z"), py::arg("lam"), py::arg("eps"));

  m.def("woodbury_coefficients", &woodbury_coefficients, py::arg("z"), py::arg("y"), py::arg("lam"));

  m.def("sample", &sample, py::arg("kernel"), py::arg("datasets"), py::arg("q"), py::arg("eps"), py::arg("lam"),
        py::arg("mu"), py::arg("samples_const"), py::arg("samples"), py::arg("seed"));
}
