#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tensorlev {

/// Real-input DFT of a fixed length backed by FFTW. Plans are created once
/// per length and shared; execution is reentrant.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }

  /// spectrum <- DFT(input); input has n entries, spectrum n/2+1.
  void forward(const double* input, std::complex<double>* spectrum) const;
  /// output <- unnormalized inverse DFT(spectrum) (scaled by n).
  /// The spectrum buffer is clobbered.
  void inverse(std::complex<double>* spectrum, double* output) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace tensorlev
