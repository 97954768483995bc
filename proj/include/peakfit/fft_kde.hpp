#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "peakfit/fft.hpp"
#include "peakfit/grid.hpp"
#include "peakfit/kernels.hpp"

namespace peakfit {

// Background density values below this are lifted to it before entering any
// likelihood denominator.
inline constexpr double kDensityFloor = 1e-300;

// Kernel sampled at integer lags: taps[radius + r] = K_h(r*delta) for
// r = -radius..radius. radius = ceil(support * h / delta), so the sampled
// support always covers the kernel's effective support.
struct KernelTaps {
  std::size_t radius{0};
  std::vector<double> taps;

  double at(std::ptrdiff_t r) const {
    return taps[std::size_t(std::ptrdiff_t(radius) + r)];
  }
};

KernelTaps sample_kernel_taps(const Kernel& kernel, Bandwidth h, double delta);

struct KdeEstimate {
  UniformGrid grid;
  std::vector<double> values;  // density at each node, clamped nonnegative
  double bandwidth{0.0};
};

// Discrete linear convolution of the bin counts with the kernel taps,
// computed by zero-padded FFT of length P (smallest power of two holding
// M + L - 1 when fft_length is 0). Tap layout in the padded buffer: lag 0 at
// position 0, positive lags at 1..R, negative lags wrapped to P-R..P-1.
KdeEstimate convolve_fft(const BinnedWeights& binned, const KernelTaps& taps,
                         const UniformGrid& grid, Bandwidth h,
                         std::size_t fft_length = 0);

// Direct O(n * |query|) weighted KDE, f(q) = sum_j w_j K_h(Y_j - q). This is
// the reference the fast path is checked against, and the evaluator the
// vanilla EM engine uses.
std::vector<double> evaluate_exact(std::span<const double> sample,
                                   std::span<const double> weights,
                                   Bandwidth h, const Kernel& kernel,
                                   std::span<const double> query);

// Linear interpolation between the flanking nodes; a query exactly on the
// last node reads that node alone.
double interpolate_offgrid(const KdeEstimate& kde, double query);
std::vector<double> interpolate_offgrid(const KdeEstimate& kde,
                                        std::span<const double> query);

// bin -> taps -> convolve in one call.
KdeEstimate weighted_kde_fft(std::span<const double> sample,
                             std::span<const double> weights, Bandwidth h,
                             const Kernel& kernel, const UniformGrid& grid);

// Reusable convolution state for iterative fits: the plan and the transformed
// kernel depend only on (grid, h), so repeated background updates pay one
// forward FFT, one product and one inverse FFT each. Not safe to share across
// concurrent fits; give each fit its own engine.
class ConvolutionEngine {
 public:
  ConvolutionEngine(const Kernel& kernel, Bandwidth h, const UniformGrid& grid);

  const UniformGrid& grid() const { return grid_; }
  double bandwidth() const { return h_; }

  KdeEstimate convolve(const BinnedWeights& binned) const;

 private:
  UniformGrid grid_;
  double h_;
  KernelTaps taps_;
  FftPlan plan_;
  std::vector<std::complex<double>> kernel_spectrum_;
  mutable std::vector<std::complex<double>> scratch_;
};

}  // namespace peakfit
