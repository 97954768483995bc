#include "peakfit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace peakfit::detail {

double weighted_quantile(std::span<const double> values,
                         std::span<const double> weights, double p) {
  if (values.empty() || values.size() != weights.size())
    throw std::invalid_argument("weighted_quantile: bad input lengths");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("weighted_quantile: p outside [0,1]");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  const double tie_eps = 1e-12;
  double cum = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    cum += weights[order[k]];
    if (cum >= p - tie_eps) {
      if (std::abs(cum - p) <= tie_eps && k + 1 < order.size())
        return 0.5 * (values[order[k]] + values[order[k + 1]]);
      return values[order[k]];
    }
  }
  return values[order.back()];
}

WeightedMoments weighted_moments(std::span<const double> values,
                                 std::span<const double> weights) {
  if (values.empty() || values.size() != weights.size())
    throw std::invalid_argument("weighted_moments: bad input lengths");
  double mean = 0.0, wsq = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    mean += weights[i] * values[i];
    wsq += weights[i] * weights[i];
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean;
    ss += weights[i] * d * d;
  }
  const double correction = 1.0 - wsq;
  const double variance = correction > 0.0 ? ss / correction : 0.0;
  return {mean, variance};
}

double stable_sum(std::span<const double> values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace peakfit::detail
