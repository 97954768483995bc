#include "peakfit/fft.hpp"

#include <numbers>
#include <stdexcept>
#include <utility>

namespace peakfit {

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (!is_pow2(n)) throw std::invalid_argument("fft size must be a power of two");
  log2n_ = 0;
  while ((std::size_t{1} << log2n_) < n) ++log2n_;

  rev_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t r = 0;
    for (int b = 0; b < log2n_; ++b)
      if (i & (std::size_t{1} << b)) r |= std::uint32_t(1) << (log2n_ - 1 - b);
    rev_[i] = r;
  }

  roots_.resize(n / 2 > 0 ? n / 2 : 1);
  for (std::size_t k = 0; k < roots_.size(); ++k) {
    const double ang = -2.0 * std::numbers::pi * double(k) / double(n);
    roots_[k] = {std::cos(ang), std::sin(ang)};
  }
}

std::size_t FftPlan::next_pow2(std::size_t x) {
  std::size_t p = 1;
  while (p < x) p <<= 1;
  return p;
}

void FftPlan::transform(std::complex<double>* a, bool inverse) const {
  for (std::size_t i = 0; i < n_; ++i)
    if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);

  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t step = n_ / len;
    for (std::size_t block = 0; block < n_; block += len) {
      for (std::size_t j = 0; j < half; ++j) {
        std::complex<double> w = roots_[j * step];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = a[block + j];
        const std::complex<double> v = a[block + j + half] * w;
        a[block + j] = u + v;
        a[block + j + half] = u - v;
      }
    }
  }
}

void FftPlan::inverse(std::complex<double>* data) const {
  transform(data, true);
  const double scale = 1.0 / double(n_);
  for (std::size_t i = 0; i < n_; ++i) data[i] *= scale;
}

}  // namespace peakfit
