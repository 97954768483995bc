#pragma once

#include <span>

namespace peakfit {

enum class KernelKind { Gaussian };

// Second-order smoothing kernel together with the constants the binned
// convolution error analysis needs: the sup of |K''| drives the accuracy
// bound, and the effective support radius (in bandwidth units) bounds where
// K is treated as exactly zero.
struct Kernel {
  KernelKind kind{KernelKind::Gaussian};
  double sup_abs_second_derivative{0.0};
  double effective_support_radius{0.0};
  double second_moment{0.0};  // integral of z^2 |K(z)| dz

  double operator()(double z) const;

  static Kernel gaussian();
};

// Strictly positive finite bandwidth.
class Bandwidth {
 public:
  explicit Bandwidth(double h);
  double value() const { return h_; }

 private:
  double h_;
};

// K_h(u) = K(u/h)/h, exactly zero once |u/h| exceeds the support radius.
double evaluate_scaled(const Kernel& kernel, Bandwidth h, double u);

// Silverman's rule of thumb: 0.9 * min(sd, IQR/1.34) * n^(-1/5), with the
// weighted analogues when per-observation weights (summing to 1) are given.
// A spread candidate that is exactly zero is dropped; if both are zero the
// sample is degenerate. The result is clamped below by 1e-12 * range.
Bandwidth silverman_bandwidth(std::span<const double> sample,
                              std::span<const double> weights = {});

}  // namespace peakfit
