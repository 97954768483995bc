#include "peakfit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "peakfit/stats.hpp"

namespace peakfit {

namespace {
constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2*pi)
}

double Kernel::operator()(double z) const {
  if (std::abs(z) > effective_support_radius) return 0.0;
  // Gaussian is the only shipped kind.
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

Kernel Kernel::gaussian() {
  Kernel k;
  k.kind = KernelKind::Gaussian;
  // |K''(z)| = phi(z)|z^2-1| attains its maximum phi(0) at z = 0.
  k.sup_abs_second_derivative = kInvSqrt2Pi;
  // phi(8) < 1e-14, far below every tolerance used downstream.
  k.effective_support_radius = 8.0;
  k.second_moment = 1.0;
  return k;
}

Bandwidth::Bandwidth(double h) : h_(h) {
  if (!(std::isfinite(h) && h > 0.0))
    throw std::invalid_argument("bandwidth must be positive and finite");
}

double evaluate_scaled(const Kernel& kernel, Bandwidth h, double u) {
  if (!std::isfinite(u)) throw std::invalid_argument("non-finite input");
  return kernel(u / h.value()) / h.value();
}

Bandwidth silverman_bandwidth(std::span<const double> sample,
                              std::span<const double> weights) {
  const std::size_t n = sample.size();
  if (n < 2) throw std::invalid_argument("sample too small");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double y : sample) {
    if (!std::isfinite(y)) throw std::invalid_argument("non-finite input");
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }

  std::vector<double> w;
  if (weights.empty()) {
    w.assign(n, 1.0 / double(n));
  } else {
    if (weights.size() != n)
      throw std::invalid_argument("weights length mismatch");
    double total = 0.0;
    for (double wi : weights) {
      if (!(wi >= 0.0) || !std::isfinite(wi))
        throw std::invalid_argument("negative weight");
      total += wi;
    }
    if (std::abs(total - 1.0) > 1e-8)
      throw std::invalid_argument("weights must sum to 1");
    w.assign(weights.begin(), weights.end());
  }

  const auto moments = detail::weighted_moments(sample, w);
  const double sd = std::sqrt(std::max(moments.variance, 0.0));
  const double iqr = detail::weighted_quantile(sample, w, 0.75) -
                     detail::weighted_quantile(sample, w, 0.25);
  if (sd == 0.0 && iqr == 0.0) throw std::invalid_argument("degenerate sample");

  double spread = std::numeric_limits<double>::infinity();
  if (sd > 0.0) spread = std::min(spread, sd);
  if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);

  double h = 0.9 * spread * std::pow(double(n), -0.2);
  h = std::max(h, 1e-12 * (hi - lo));
  return Bandwidth(h);
}

}  // namespace peakfit
