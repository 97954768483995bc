#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace peakfit {

// Uniform evaluation grid x_i = x0 + i*delta, i = 0..m-1 (0-based throughout).
struct UniformGrid {
  double x0{0.0};
  double delta{1.0};
  std::size_t m{2};

  double node(std::size_t i) const { return x0 + double(i) * delta; }
  double last() const { return node(m - 1); }
  bool contains(double y) const;

  struct Location {
    std::size_t index;  // lower flanking node
    double alpha;       // fractional offset in [0,1)
  };

  // Position of y between its flanking nodes; nullopt when y is non-finite or
  // outside [x0, last()]. A point exactly on the last node gets alpha = 0 at
  // index m-1 so it never reaches past the grid.
  std::optional<Location> try_locate(double y) const;
};

// Grid spanning the sample plus symmetric padding of
// padding_fraction*range + 3*pad_bandwidth on each side.
UniformGrid build_grid(std::span<const double> sample, std::size_t m,
                       double padding_fraction, double pad_bandwidth = 0.0);

struct BinnedWeights {
  std::vector<double> counts;  // one cell per grid node
};

// Linear binning: each weighted point splits its mass between the two
// flanking nodes in proportion to its fractional offset. The split parts are
// computed as (w - w*alpha, w*alpha) so they add back to w exactly.
BinnedWeights linear_bin(std::span<const double> sample,
                         std::span<const double> weights,
                         const UniformGrid& grid);

}  // namespace peakfit
