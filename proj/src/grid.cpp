#include "peakfit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace peakfit {

bool UniformGrid::contains(double y) const {
  return std::isfinite(y) && y >= x0 && y <= last();
}

std::optional<UniformGrid::Location> UniformGrid::try_locate(double y) const {
  if (!contains(y)) return std::nullopt;
  const double p = (y - x0) / delta;
  if (p >= double(m - 1)) return Location{m - 1, 0.0};
  const auto j = std::size_t(p);
  return Location{j, p - double(j)};
}

UniformGrid build_grid(std::span<const double> sample, std::size_t m,
                       double padding_fraction, double pad_bandwidth) {
  if (m < 2) throw std::invalid_argument("grid needs at least two nodes");
  if (sample.empty()) throw std::invalid_argument("empty sample");
  if (!(padding_fraction >= 0.0) || !(pad_bandwidth >= 0.0))
    throw std::invalid_argument("padding must be nonnegative");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double y : sample) {
    if (!std::isfinite(y)) throw std::invalid_argument("non-finite input");
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }

  const double range = hi - lo;
  const double pad = padding_fraction * range + 3.0 * pad_bandwidth;
  const double span = range + 2.0 * pad;
  if (!(span > 0.0)) throw std::invalid_argument("degenerate grid");

  UniformGrid g;
  g.x0 = lo - pad;
  g.delta = span / double(m - 1);
  g.m = m;
  // Rounding in span/(m-1) can leave the last node a hair short of max(Y);
  // widen delta by ulps until the grid provably covers the sample.
  while (g.last() < hi)
    g.delta = std::nextafter(g.delta, std::numeric_limits<double>::infinity());
  return g;
}

BinnedWeights linear_bin(std::span<const double> sample,
                         std::span<const double> weights,
                         const UniformGrid& grid) {
  if (sample.size() != weights.size())
    throw std::invalid_argument("weights length mismatch");

  BinnedWeights out;
  out.counts.assign(grid.m, 0.0);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double w = weights[i];
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("negative weight at index " +
                                  std::to_string(i));
    const auto loc = grid.try_locate(sample[i]);
    if (!loc)
      throw std::invalid_argument("point off grid at index " +
                                  std::to_string(i));
    const double upper = w * loc->alpha;
    out.counts[loc->index] += w - upper;
    if (upper != 0.0) out.counts[loc->index + 1] += upper;
  }
  return out;
}

}  // namespace peakfit
