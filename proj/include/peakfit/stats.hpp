#pragma once

#include <span>
#include <vector>

namespace peakfit::detail {

// Quantile of weighted data with the midpoint convention: when the target
// probability lands exactly on a cumulative-weight boundary the two straddling
// order statistics are averaged. With uniform weights and n=2 this gives
// q25=x(1), q75=x(2) so IQR({0,1}) = 1.
double weighted_quantile(std::span<const double> values,
                         std::span<const double> weights, double p);

struct WeightedMoments {
  double mean;
  double variance;  // reliability-weight (frequency-unbiased) convention
};

// Weights must be nonnegative and sum to 1. With uniform weights the variance
// reduces to the usual n-1 sample variance.
WeightedMoments weighted_moments(std::span<const double> values,
                                 std::span<const double> weights);

// Neumaier compensated summation.
double stable_sum(std::span<const double> values);

}  // namespace peakfit::detail
