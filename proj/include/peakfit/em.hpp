#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "peakfit/fft_kde.hpp"
#include "peakfit/grid.hpp"
#include "peakfit/kernels.hpp"

namespace peakfit {

enum class FamilyKind { GaussianLocationScale };

// Working parametric family for the dominant component.
struct ParametricFamily {
  FamilyKind kind{FamilyKind::GaussianLocationScale};
  double mu{0.0};
  double sigma{1.0};

  double density(double y) const;
  double log_density(double y) const;
};

struct EmConfig {
  // Silverman's rule on the full sample when unset.
  std::optional<double> bandwidth{};
  // 0 = auto: smallest power of two >= 1024 with delta <= h/10.
  std::size_t grid_size{0};
  double padding_fraction{0.0};
  // Explicit grid overrides grid_size/padding_fraction. If the sample falls
  // off it, the grid is rebuilt from the sample once before giving up.
  std::optional<UniformGrid> grid{};
  double tol{1e-6};
  std::size_t max_iterations{500};
  std::uint64_t seed{0};
  // Mixing-weight clamp [pi_min, 1 - pi_min].
  double pi_min{1e-4};
};

struct TwoComponentFit {
  double pi0{0.0};
  ParametricFamily theta{};
  std::vector<double> responsibilities;  // the vector the final M-step saw
  std::vector<double> loglik_trace;      // working log-likelihood per iteration
  std::size_t iterations{0};
  bool converged{false};
  KdeEstimate background;  // last background refresh, on the grid
};

// Posterior weight of the parametric component at each sample point, with the
// background values floored before entering the denominator.
std::vector<double> e_step(std::span<const double> sample, double pi0,
                           const ParametricFamily& theta,
                           const KdeEstimate& background);

// Closed-form update: pi0 = clamp(mean r), mu and sigma the r-weighted mean
// and (ML-convention) standard deviation. sigma is clamped below by
// 1e-6 * range(sample).
std::pair<double, ParametricFamily> m_step(
    std::span<const double> sample, std::span<const double> responsibilities,
    double pi_min = 1e-4);

// Alternating plug-in EM with an FFT-refreshed background and Bernoulli(0.5)
// seeded split initialization.
TwoComponentFit fit_two_component(std::span<const double> sample,
                                  const EmConfig& config);

// Same loop from a caller-supplied r^(0) in [0,1]^n.
TwoComponentFit fit_two_component(std::span<const double> sample,
                                  const EmConfig& config,
                                  std::span<const double> initial_responsibilities);

struct DualInitFit {
  TwoComponentFit selected;   // the run with the larger fitted pi0
  TwoComponentFit alternate;  // the discarded run
};

// Two-means split of the sample, one run started from the cluster indicator
// and one from its complement; keeps the fit with the larger pi0_hat so the
// parametric component lands on the dominant peak rather than the background.
DualInitFit fit_dual_init(std::span<const double> sample, const EmConfig& config);
TwoComponentFit fit_with_dual_init(std::span<const double> sample,
                                   const EmConfig& config);

// Identical EM loop with the background recomputed by direct O(n^2) kernel
// sums instead of binned convolution. The comparison baseline for benchmarks.
TwoComponentFit fit_vanilla_em(std::span<const double> sample,
                               const EmConfig& config);
TwoComponentFit fit_vanilla_em(std::span<const double> sample,
                               const EmConfig& config,
                               std::span<const double> initial_responsibilities);

// Lloyd's algorithm on scalars with centers seeded at the (weighted) 25th and
// 75th percentiles; deterministic, at most 100 sweeps. Label 0 marks the
// cluster with the lower center.
std::vector<std::uint8_t> two_means_labels(std::span<const double> sample,
                                           std::span<const double> weights = {});

namespace detail {

struct WeightedEmOptions {
  double tol{1e-6};
  std::size_t max_iterations{500};
  double alpha_min{1e-4};  // clamp [alpha_min, 1 - alpha_min]
  std::uint64_t seed{0};
};

struct WeightedEmResult {
  double alpha{0.0};
  ParametricFamily theta{};
  std::vector<double> responsibilities;
  std::vector<double> loglik_trace;
  std::size_t iterations{0};
  bool converged{false};
  KdeEstimate background;
};

// Background refresh interface shared by the FFT and direct engines: given
// normalized binning weights it returns the background density at every
// sample point and keeps a grid snapshot for the caller.
class BackgroundModel {
 public:
  virtual ~BackgroundModel() = default;
  virtual std::vector<double> refresh(std::span<const double> omega) = 0;
  virtual KdeEstimate snapshot() const = 0;
};

// Two-component EM with per-observation case weights summing to 1 (uniform
// weights recover the plain fit; the sequential extractor passes residual
// weights). Follows the alternating scheme: background refresh from the
// previous responsibilities, E-step, M-step, then the working log-likelihood
// of the new parameters against the pre-refresh background.
WeightedEmResult run_weighted_em(std::span<const double> sample,
                                 std::span<const double> case_weights,
                                 std::span<const double> r0,
                                 const WeightedEmOptions& options,
                                 BackgroundModel& background);

UniformGrid auto_grid(std::span<const double> sample, double h,
                      std::size_t grid_size, double padding_fraction);

std::vector<double> bernoulli_split(std::size_t n, std::uint64_t seed);

}  // namespace detail

}  // namespace peakfit
