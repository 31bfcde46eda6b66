#include "tensorlev/fft.hpp"

#include "tensorlev/common.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace tensorlev {

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW's planner is not thread safe; plans live for the life of the process.
PlanPair plans_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const int len = static_cast<int>(n);
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft_r2c_1d(len, in, out, flags),
             fftw_plan_dft_c2r_1d(len, out, in, flags | FFTW_DESTROY_INPUT)};
  fftw_free(in);
  fftw_free(out);
  if (p.forward == nullptr || p.inverse == nullptr) throw NumericalError("FFTW planning failed");
  cache.emplace(n, p);
  return p;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  require(n >= 1, "RealFft: empty length");
  auto p = plans_for(n);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void RealFft::forward(const double* input, std::complex<double>* spectrum) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(input),
                       reinterpret_cast<fftw_complex*>(spectrum));
}

void RealFft::inverse(std::complex<double>* spectrum, double* output) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(spectrum), output);
}

}  // namespace tensorlev
