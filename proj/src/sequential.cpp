#include "peakfit/sequential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace peakfit {

namespace {

class StageBackground final : public detail::BackgroundModel {
 public:
  StageBackground(std::span<const double> sample, Bandwidth h,
                  const UniformGrid& grid)
      : sample_(sample), engine_(Kernel::gaussian(), h, grid) {}

  std::vector<double> refresh(std::span<const double> omega) override {
    const auto binned = linear_bin(sample_, omega, engine_.grid());
    kde_ = engine_.convolve(binned);
    return interpolate_offgrid(kde_, sample_);
  }

  KdeEstimate snapshot() const override { return kde_; }

 private:
  std::span<const double> sample_;
  ConvolutionEngine engine_;
  KdeEstimate kde_;
};

double prior_mass(std::span<const StageResult> prior_stages) {
  double total = 0.0;
  for (const auto& s : prior_stages) total += s.alpha_global;
  return total;
}

struct StagePrep {
  Bandwidth h;
  UniformGrid grid;
};

StagePrep stage_prep(std::span<const double> sample, const EmConfig& em) {
  const Bandwidth h =
      em.bandwidth ? Bandwidth(*em.bandwidth) : silverman_bandwidth(sample);
  const UniformGrid grid =
      em.grid ? *em.grid
              : detail::auto_grid(sample, h.value(), em.grid_size,
                                  em.padding_fraction);
  return {h, grid};
}

// Initial responsibilities concentrated on the tallest mode of the
// residual-weighted KDE: one E-step of a Gaussian built from the local
// weighted moments around that mode, evaluated against the KDE itself.
std::vector<double> mode_seed_r0(std::span<const double> sample,
                                 std::span<const double> w, Bandwidth h,
                                 const UniformGrid& grid) {
  const KdeEstimate kde =
      weighted_kde_fft(sample, w, h, Kernel::gaussian(), grid);
  std::size_t peak = 0;
  for (std::size_t m = 1; m < kde.values.size(); ++m)
    if (kde.values[m] > kde.values[peak]) peak = m;
  const double mode = kde.grid.node(peak);

  const double window = 2.0 * h.value();
  double mass = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i)
    if (std::abs(sample[i] - mode) <= window) {
      mass += w[i];
      mean += w[i] * sample[i];
    }
  const double mu0 = mass > 0.0 ? mean / mass : mode;
  double ss = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i)
    if (std::abs(sample[i] - mode) <= window)
      ss += w[i] * (sample[i] - mu0) * (sample[i] - mu0);
  const double sigma0 =
      std::max(mass > 0.0 ? std::sqrt(ss / mass) : h.value(),
               0.5 * h.value());
  const double alpha0 = std::clamp(mass, 0.05, 0.9);

  const ParametricFamily theta0{FamilyKind::GaussianLocationScale, mu0,
                                sigma0};
  const auto fbg = interpolate_offgrid(kde, sample);
  std::vector<double> r0(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double num = alpha0 * theta0.density(sample[i]);
    r0[i] =
        num / (num + (1.0 - alpha0) * std::max(fbg[i], kDensityFloor));
  }
  return r0;
}

}  // namespace

std::vector<double> residual_weights(std::span<const double> sample,
                                     std::span<const PriorPeak> prior,
                                     const DensityFn& fhat) {
  const std::size_t n = sample.size();
  if (n == 0) throw std::invalid_argument("empty sample");

  std::vector<double> v(n, 1.0);
  if (!prior.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      const double den = std::max(fhat(sample[i]), kDensityFloor);
      double explained = 0.0;
      for (const auto& peak : prior)
        explained += peak.alpha * peak.theta.density(sample[i]);
      v[i] = std::max(0.0, 1.0 - explained / den);
    }
  }

  double total = 0.0;
  for (double vi : v) total += vi;
  if (!(total > 0.0)) throw std::runtime_error("residual mass exhausted");
  for (auto& vi : v) vi /= total;
  return v;
}

DensityFn fit_density_for_residuals(std::span<const double> sample,
                                    std::span<const StageResult> prior_stages,
                                    Bandwidth h, const UniformGrid& grid) {
  if (prior_stages.empty()) {
    std::vector<double> uniform(sample.size(), 1.0 / double(sample.size()));
    KdeEstimate kde =
        weighted_kde_fft(sample, uniform, h, Kernel::gaussian(), grid);
    return [kde = std::move(kde)](double y) {
      return kde.grid.contains(y) ? interpolate_offgrid(kde, y) : 0.0;
    };
  }

  std::vector<PriorPeak> peaks;
  peaks.reserve(prior_stages.size());
  for (const auto& s : prior_stages)
    peaks.push_back({s.alpha_global, s.theta});
  const double leftover = 1.0 - prior_mass(prior_stages);
  KdeEstimate kde = prior_stages.back().background;

  return [peaks = std::move(peaks), leftover, kde = std::move(kde)](double y) {
    double f = 0.0;
    for (const auto& peak : peaks) f += peak.alpha * peak.theta.density(y);
    if (kde.grid.contains(y)) f += leftover * interpolate_offgrid(kde, y);
    return f;
  };
}

StageResult fit_stage(std::span<const double> sample, std::size_t stage_index,
                      std::span<const StageResult> prior_stages,
                      const SequentialConfig& config) {
  if (stage_index != prior_stages.size() + 1)
    throw std::invalid_argument("stage index out of order");

  const auto prep = stage_prep(sample, config.em);

  std::vector<double> w;
  if (prior_stages.empty()) {
    w.assign(sample.size(), 1.0 / double(sample.size()));
  } else {
    std::vector<PriorPeak> peaks;
    for (const auto& s : prior_stages)
      peaks.push_back({s.alpha_global, s.theta});
    const auto fhat =
        fit_density_for_residuals(sample, prior_stages, prep.h, prep.grid);
    w = residual_weights(sample, peaks, fhat);
  }

  // Later stages fit against a residual that is usually much narrower than
  // the full sample, so the bandwidth is recomputed under the stage weights;
  // the global rule would oversmooth the background and let the parametric
  // component swallow neighbouring peaks.
  const Bandwidth stage_h = config.em.bandwidth ? Bandwidth(*config.em.bandwidth)
                            : prior_stages.empty()
                                ? prep.h
                                : silverman_bandwidth(sample, w);

  detail::WeightedEmOptions options;
  options.tol = config.em.tol;
  options.max_iterations = config.em.max_iterations;
  options.alpha_min = config.alpha_min;

  const auto labels = two_means_labels(sample, w);
  std::vector<double> r_a(sample.size()), r_b(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    r_a[i] = labels[i] == 0 ? 1.0 : 0.0;
    r_b[i] = 1.0 - r_a[i];
  }
  const auto r_m = mode_seed_r0(sample, w, stage_h, prep.grid);

  auto run = [&](std::span<const double> r0) {
    StageBackground model(sample, stage_h, prep.grid);
    return detail::run_weighted_em(sample, w, r0, options, model);
  };

  // A start that collapses onto tied observations ends with sigma at the
  // m-step floor and an unbounded likelihood, so spike fits would always win
  // the selection. They only count when every start collapsed.
  const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
  const double spike_sigma = 1e-5 * (*hi - *lo);

  const std::array<std::span<const double>, 3> starts{
      std::span<const double>(r_a), std::span<const double>(r_b),
      std::span<const double>(r_m)};
  std::optional<detail::WeightedEmResult> best, best_spike;
  std::exception_ptr first_error;
  for (const auto& r0 : starts) {
    try {
      auto res = run(r0);
      auto& slot = res.theta.sigma > spike_sigma ? best : best_spike;
      if (!slot || res.loglik_trace.back() > slot->loglik_trace.back())
        slot = std::move(res);
    } catch (...) {
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (!best) best = std::move(best_spike);
  if (!best) std::rethrow_exception(first_error);

  StageResult out;
  out.stage = stage_index;
  out.theta = best->theta;
  out.alpha_within_stage = best->alpha;
  out.alpha_global = best->alpha * (1.0 - prior_mass(prior_stages));
  out.background = std::move(best->background);
  out.residual_weights = std::move(w);
  out.loglik_trace = std::move(best->loglik_trace);
  out.iterations = best->iterations;
  out.converged = best->converged;
  return out;
}

SequentialFit fit_sequential(std::span<const double> sample,
                             std::size_t max_stages,
                             const SequentialConfig& config) {
  if (max_stages == 0) throw std::invalid_argument("max_stages must be >= 1");

  SequentialFit fit;
  fit.stop_reason = StopReason::max_stages;

  for (std::size_t stage = 1; stage <= max_stages; ++stage) {
    StageResult result;
    try {
      result = fit_stage(sample, stage, fit.stages, config);
    } catch (...) {
      if (stage == 1) throw;  // nothing extracted: surface the failure
      fit.stop_reason = StopReason::stage_failed;
      break;
    }

    if (result.alpha_within_stage < config.alpha_stop && stage > 1) {
      fit.stop_reason = StopReason::mass_exhausted;
      break;
    }
    fit.stages.push_back(std::move(result));
    if (fit.stages.back().alpha_within_stage < config.alpha_stop) {
      // First stage below threshold: keep the one peak but stop extracting.
      fit.stop_reason = StopReason::mass_exhausted;
      break;
    }
  }

  fit.total_parametric_mass = prior_mass(fit.stages);
  return fit;
}

}  // namespace peakfit
