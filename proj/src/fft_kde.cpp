#include "peakfit/fft_kde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace peakfit {

namespace {

// Spread taps into the padded buffer: lag 0 at slot 0, positive lags at
// 1..R, negative lags wrapped to the top of the buffer.
std::vector<std::complex<double>> layout_taps(const KernelTaps& taps,
                                              std::size_t p) {
  std::vector<std::complex<double>> buf(p, {0.0, 0.0});
  buf[0] = taps.at(0);
  for (std::size_t r = 1; r <= taps.radius; ++r) {
    buf[r] = taps.at(std::ptrdiff_t(r));
    buf[p - r] = taps.at(-std::ptrdiff_t(r));
  }
  return buf;
}

KdeEstimate finish_convolution(const std::vector<std::complex<double>>& padded,
                               const UniformGrid& grid, double h) {
  KdeEstimate out;
  out.grid = grid;
  out.bandwidth = h;
  out.values.resize(grid.m);
  for (std::size_t m = 0; m < grid.m; ++m) {
    if (std::abs(padded[m].imag()) >= 1e-8)
      throw std::runtime_error("fft imaginary residue too large");
    double v = padded[m].real();
    if (v < -1e-12)
      throw std::runtime_error("negative density from convolution");
    out.values[m] = std::max(v, 0.0);
  }
  return out;
}

std::size_t required_length(std::size_t m, std::size_t radius) {
  return m + 2 * radius;  // M + L - 1 with L = 2R + 1
}

}  // namespace

KernelTaps sample_kernel_taps(const Kernel& kernel, Bandwidth h, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("delta must be positive");
  const double radius_real = kernel.effective_support_radius * h.value() / delta;
  const auto radius = std::size_t(std::ceil(radius_real));

  KernelTaps taps;
  taps.radius = radius;
  taps.taps.resize(2 * radius + 1);
  for (std::size_t k = 0; k < taps.taps.size(); ++k) {
    const double lag = (double(k) - double(radius)) * delta;
    taps.taps[k] = evaluate_scaled(kernel, h, lag);
  }
  return taps;
}

KdeEstimate convolve_fft(const BinnedWeights& binned, const KernelTaps& taps,
                         const UniformGrid& grid, Bandwidth h,
                         std::size_t fft_length) {
  if (binned.counts.size() != grid.m)
    throw std::invalid_argument("bin count does not match grid");

  const std::size_t needed = required_length(grid.m, taps.radius);
  const std::size_t p =
      fft_length == 0 ? FftPlan::next_pow2(needed) : fft_length;
  if (p < needed) throw std::invalid_argument("insufficient padding");
  if (!FftPlan::is_pow2(p))
    throw std::invalid_argument("fft length must be a power of two");

  FftPlan plan(p);
  auto kbuf = layout_taps(taps, p);
  plan.forward(kbuf.data());

  std::vector<std::complex<double>> cbuf(p, {0.0, 0.0});
  for (std::size_t i = 0; i < grid.m; ++i) cbuf[i] = binned.counts[i];
  plan.forward(cbuf.data());
  for (std::size_t i = 0; i < p; ++i) cbuf[i] *= kbuf[i];
  plan.inverse(cbuf.data());

  return finish_convolution(cbuf, grid, h.value());
}

std::vector<double> evaluate_exact(std::span<const double> sample,
                                   std::span<const double> weights,
                                   Bandwidth h, const Kernel& kernel,
                                   std::span<const double> query) {
  if (sample.size() != weights.size())
    throw std::invalid_argument("weights length mismatch");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("negative weight");

  const double hv = h.value();
  const double cutoff = kernel.effective_support_radius * hv;

  std::vector<double> out(query.size(), 0.0);
  for (std::size_t q = 0; q < query.size(); ++q) {
    if (!std::isfinite(query[q]))
      throw std::invalid_argument("non-finite input");
    double acc = 0.0;
    for (std::size_t j = 0; j < sample.size(); ++j) {
      const double u = sample[j] - query[q];
      if (u > cutoff || u < -cutoff) continue;
      acc += weights[j] * kernel(u / hv);
    }
    out[q] = acc / hv;
  }
  return out;
}

double interpolate_offgrid(const KdeEstimate& kde, double query) {
  const auto loc = kde.grid.try_locate(query);
  if (!loc) throw std::out_of_range("query off grid");
  if (loc->alpha == 0.0) return kde.values[loc->index];
  return (1.0 - loc->alpha) * kde.values[loc->index] +
         loc->alpha * kde.values[loc->index + 1];
}

std::vector<double> interpolate_offgrid(const KdeEstimate& kde,
                                        std::span<const double> query) {
  std::vector<double> out(query.size());
  for (std::size_t i = 0; i < query.size(); ++i)
    out[i] = interpolate_offgrid(kde, query[i]);
  return out;
}

KdeEstimate weighted_kde_fft(std::span<const double> sample,
                             std::span<const double> weights, Bandwidth h,
                             const Kernel& kernel, const UniformGrid& grid) {
  const auto binned = linear_bin(sample, weights, grid);
  const auto taps = sample_kernel_taps(kernel, h, grid.delta);
  return convolve_fft(binned, taps, grid, h);
}

ConvolutionEngine::ConvolutionEngine(const Kernel& kernel, Bandwidth h,
                                     const UniformGrid& grid)
    : grid_(grid),
      h_(h.value()),
      taps_(sample_kernel_taps(kernel, h, grid.delta)),
      plan_(FftPlan::next_pow2(required_length(grid.m, taps_.radius))) {
  kernel_spectrum_ = layout_taps(taps_, plan_.size());
  plan_.forward(kernel_spectrum_.data());
  scratch_.resize(plan_.size());
}

KdeEstimate ConvolutionEngine::convolve(const BinnedWeights& binned) const {
  if (binned.counts.size() != grid_.m)
    throw std::invalid_argument("bin count does not match grid");
  std::fill(scratch_.begin(), scratch_.end(), std::complex<double>{0.0, 0.0});
  for (std::size_t i = 0; i < grid_.m; ++i) scratch_[i] = binned.counts[i];
  plan_.forward(scratch_.data());
  for (std::size_t i = 0; i < scratch_.size(); ++i)
    scratch_[i] *= kernel_spectrum_[i];
  plan_.inverse(scratch_.data());
  return finish_convolution(scratch_, grid_, h_);
}

}  // namespace peakfit
