#pragma once

#include <functional>
#include <span>
#include <vector>

#include "peakfit/em.hpp"

namespace peakfit {

// A peak already extracted, with its mixing weight in the original mixture.
struct PriorPeak {
  double alpha;  // global mass
  ParametricFamily theta;
};

enum class StopReason { max_stages, mass_exhausted, stage_failed };

struct StageResult {
  std::size_t stage{1};  // 1-based
  ParametricFamily theta{};
  double alpha_within_stage{0.0};  // mixing weight inside the residual mixture
  double alpha_global{0.0};        // alpha_within * remaining global mass
  KdeEstimate background;
  std::vector<double> residual_weights;
  std::vector<double> loglik_trace;
  std::size_t iterations{0};
  bool converged{false};
};

struct SequentialConfig {
  EmConfig em{};  // bandwidth, grid, tol, maxit shared by every stage
  std::size_t max_stages{3};
  // A stage whose within-stage mixing weight falls below this is discarded
  // and extraction stops (the candidate peak is too small to trust).
  double alpha_stop{0.05};
  // Stage mixing-weight clamp [alpha_min, 1 - alpha_min].
  double alpha_min{0.01};
};

struct SequentialFit {
  std::vector<StageResult> stages;
  double total_parametric_mass{0.0};
  StopReason stop_reason{StopReason::max_stages};
};

using DensityFn = std::function<double(double)>;

// Residual weight of each observation against the peaks found so far:
// v_i = max(0, 1 - sum_j alpha_j f0(Y_i; theta_j) / fhat(Y_i)), normalized to
// sum to 1. With no prior peaks this is exactly uniform.
std::vector<double> residual_weights(std::span<const double> sample,
                                     std::span<const PriorPeak> prior,
                                     const DensityFn& fhat);

// Full-density estimate used in the residual weights: the prior parametric
// peaks plus the previous stage's background KDE carrying the leftover mass.
// With no prior stages it is the plain uniform-weight KDE of the sample.
DensityFn fit_density_for_residuals(std::span<const double> sample,
                                    std::span<const StageResult> prior_stages,
                                    Bandwidth h, const UniformGrid& grid);

// One extraction stage: residual-weighted two-component EM started from the
// weighted two-means indicator, its complement, and a seed concentrated on
// the tallest residual-density mode; the run with the highest final stage
// criterion value wins. Two-cluster starts alone are degenerate once the
// residual holds three or more peaks, and picking the larger mixing weight
// instead of the better criterion keeps merged multi-peak fits. Stages after
// the first recompute the Silverman bandwidth under the residual weights so
// the background stays flexible enough to hold the not-yet-extracted peaks.
StageResult fit_stage(std::span<const double> sample, std::size_t stage_index,
                      std::span<const StageResult> prior_stages,
                      const SequentialConfig& config);

// Runs stages until max_stages, the residual parametric mass drops below
// alpha_stop, or a later stage fails. A first-stage failure propagates.
SequentialFit fit_sequential(std::span<const double> sample,
                             std::size_t max_stages,
                             const SequentialConfig& config);

}  // namespace peakfit
