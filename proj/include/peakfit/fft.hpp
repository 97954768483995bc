#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace peakfit {

// Iterative radix-2 complex FFT with precomputed twiddles and bit-reversal
// table. Sizes are restricted to powers of two, which is all the zero-padded
// convolution path ever requests.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }

  void forward(std::complex<double>* data) const { transform(data, false); }

  // Inverse transform including the 1/n scaling.
  void inverse(std::complex<double>* data) const;

  static bool is_pow2(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }
  static std::size_t next_pow2(std::size_t x);

 private:
  void transform(std::complex<double>* data, bool inverse) const;

  std::size_t n_;
  int log2n_;
  std::vector<std::uint32_t> rev_;
  std::vector<std::complex<double>> roots_;  // exp(-2*pi*i*k/n), k < n/2
};

}  // namespace peakfit
