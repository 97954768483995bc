#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "peakfit/em.hpp"
#include "peakfit/simulate.hpp"

namespace peakfit {

struct BenchRow {
  std::size_t n{0};
  double fft_seconds{0.0};      // median over repeats
  double vanilla_seconds{0.0};  // median over repeats
  double speedup{0.0};
  std::size_t fft_iterations{0};
  std::size_t vanilla_iterations{0};
  double fft_mu{0.0};
  double vanilla_mu{0.0};
  bool fft_converged{false};
  bool vanilla_converged{false};
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::string environment;  // compiler + host sketch
};

struct BenchOptions {
  std::size_t repeats{3};        // must be >= 3; medians reported
  bool parallel_repeats{false};  // time each repeat on its own thread
  std::uint64_t seed{20240901};
};

// For each size: draw one sample, fix one Bernoulli split, and run both
// engines from that identical initialization under the same tol/maxit.
// Convergence parity is reported, not enforced.
BenchReport run_benchmark(std::span<const std::size_t> sizes,
                          const MixtureSpec& spec, const EmConfig& config,
                          const BenchOptions& options = {});

// Exact column set, one header line.
std::string bench_to_csv(const BenchReport& report);
std::string bench_to_json(const BenchReport& report);

struct ScalingRow {
  std::string parameter;  // "grid_size" or "n"
  std::size_t value{0};
  double seconds{0.0};  // best-of timing of one weighted_kde_fft call
};

// Times weighted_kde_fft while doubling the grid at fixed n and doubling n at
// a fixed grid, for checking the near-linear scaling laws.
std::vector<ScalingRow> scaling_probe(std::span<const std::size_t> grid_sizes,
                                      std::span<const std::size_t> sample_sizes);

}  // namespace peakfit
