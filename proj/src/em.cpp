#include "peakfit/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "peakfit/rng.hpp"
#include "peakfit/stats.hpp"

namespace peakfit {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

void validate_sample(std::span<const double> sample) {
  if (sample.size() < 10) throw std::invalid_argument("sample too small");
  for (double y : sample)
    if (!std::isfinite(y)) throw std::invalid_argument("non-finite input");
}

double sample_range(std::span<const double> sample) {
  const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
  return *hi - *lo;
}

struct MStepOut {
  double alpha;
  ParametricFamily theta;
};

MStepOut weighted_m_step(std::span<const double> y,
                         std::span<const double> case_weights,
                         std::span<const double> r, double alpha_min,
                         double sigma_floor) {
  double mass = 0.0, mu_num = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double wr = case_weights[i] * r[i];
    mass += wr;
    mu_num += wr * y[i];
  }
  if (!(mass > 0.0))
    throw std::runtime_error("parametric component vanished");

  const double mu = mu_num / mass;
  double ss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - mu;
    ss += case_weights[i] * r[i] * d * d;
  }
  double sigma = std::max(std::sqrt(ss / mass), sigma_floor);
  if (!(sigma > 0.0)) throw std::invalid_argument("degenerate sample");

  MStepOut out;
  out.alpha = std::clamp(mass, alpha_min, 1.0 - alpha_min);
  out.theta = ParametricFamily{FamilyKind::GaussianLocationScale, mu, sigma};
  return out;
}

// Background engines -------------------------------------------------------

class FftBackground final : public detail::BackgroundModel {
 public:
  FftBackground(std::span<const double> sample, Bandwidth h,
                const Kernel& kernel, const UniformGrid& grid)
      : sample_(sample), engine_(kernel, h, grid) {}

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

class DirectBackground final : public detail::BackgroundModel {
 public:
  DirectBackground(std::span<const double> sample, Bandwidth h,
                   const Kernel& kernel, const UniformGrid& grid)
      : sample_(sample), h_(h), kernel_(kernel), grid_(grid) {}

  std::vector<double> refresh(std::span<const double> omega) override {
    last_omega_.assign(omega.begin(), omega.end());
    return evaluate_exact(sample_, omega, h_, kernel_, sample_);
  }

  // Grid snapshot is only materialized on request, so the O(n*M) direct pass
  // happens once per fit rather than once per iteration.
  KdeEstimate snapshot() const override {
    std::vector<double> nodes(grid_.m);
    for (std::size_t i = 0; i < grid_.m; ++i) nodes[i] = grid_.node(i);
    KdeEstimate kde;
    kde.grid = grid_;
    kde.bandwidth = h_.value();
    kde.values = evaluate_exact(sample_, last_omega_, h_, kernel_, nodes);
    return kde;
  }

 private:
  std::span<const double> sample_;
  Bandwidth h_;
  Kernel kernel_;
  UniformGrid grid_;
  std::vector<double> last_omega_;
};

struct Prepared {
  Bandwidth h;
  UniformGrid grid;
};

Prepared prepare(std::span<const double> sample, const EmConfig& config) {
  validate_sample(sample);
  const Bandwidth h = config.bandwidth ? Bandwidth(*config.bandwidth)
                                       : silverman_bandwidth(sample);
  UniformGrid grid;
  if (config.grid) {
    grid = *config.grid;
    const bool covers = std::all_of(sample.begin(), sample.end(),
                                    [&](double y) { return grid.contains(y); });
    // One automatic rebuild when the supplied grid misses the sample.
    if (!covers)
      grid = detail::auto_grid(sample, h.value(), config.grid_size,
                               config.padding_fraction);
  } else {
    grid = detail::auto_grid(sample, h.value(), config.grid_size,
                             config.padding_fraction);
  }
  return {h, grid};
}

TwoComponentFit to_fit(detail::WeightedEmResult&& core) {
  TwoComponentFit fit;
  fit.pi0 = core.alpha;
  fit.theta = core.theta;
  fit.responsibilities = std::move(core.responsibilities);
  fit.loglik_trace = std::move(core.loglik_trace);
  fit.iterations = core.iterations;
  fit.converged = core.converged;
  fit.background = std::move(core.background);
  return fit;
}

TwoComponentFit fit_with_model(std::span<const double> sample,
                               const EmConfig& config,
                               std::span<const double> r0,
                               detail::BackgroundModel& model) {
  std::vector<double> uniform(sample.size(), 1.0 / double(sample.size()));
  detail::WeightedEmOptions options;
  options.tol = config.tol;
  options.max_iterations = config.max_iterations;
  options.alpha_min = config.pi_min;
  return to_fit(detail::run_weighted_em(sample, uniform, r0, options, model));
}

}  // namespace

double ParametricFamily::density(double y) const {
  const double z = (y - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double ParametricFamily::log_density(double y) const {
  const double z = (y - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * kLog2Pi;
}

std::vector<double> e_step(std::span<const double> sample, double pi0,
                           const ParametricFamily& theta,
                           const KdeEstimate& background) {
  if (!(pi0 > 0.0 && pi0 < 1.0))
    throw std::invalid_argument("pi0 outside (0,1)");
  std::vector<double> r(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double fbg =
        std::max(interpolate_offgrid(background, sample[i]), kDensityFloor);
    const double num = pi0 * theta.density(sample[i]);
    r[i] = num / (num + (1.0 - pi0) * fbg);
  }
  return r;
}

std::pair<double, ParametricFamily> m_step(
    std::span<const double> sample, std::span<const double> responsibilities,
    double pi_min) {
  if (sample.size() != responsibilities.size())
    throw std::invalid_argument("responsibilities length mismatch");
  if (sample.empty()) throw std::invalid_argument("empty sample");
  for (double r : responsibilities)
    if (!(r >= 0.0 && r <= 1.0))
      throw std::invalid_argument("responsibilities outside [0,1]");
  std::vector<double> uniform(sample.size(), 1.0 / double(sample.size()));
  const auto out = weighted_m_step(sample, uniform, responsibilities, pi_min,
                                   1e-6 * sample_range(sample));
  return {out.alpha, out.theta};
}

std::vector<std::uint8_t> two_means_labels(std::span<const double> sample,
                                           std::span<const double> weights) {
  const std::size_t n = sample.size();
  if (n < 2) throw std::invalid_argument("sample too small");
  std::vector<double> w;
  if (weights.empty())
    w.assign(n, 1.0 / double(n));
  else {
    if (weights.size() != n)
      throw std::invalid_argument("weights length mismatch");
    w.assign(weights.begin(), weights.end());
  }

  double c0 = detail::weighted_quantile(sample, w, 0.25);
  double c1 = detail::weighted_quantile(sample, w, 0.75);

  std::vector<std::uint8_t> labels(n, 0);
  auto assign = [&]() {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint8_t lab =
          std::abs(sample[i] - c0) <= std::abs(sample[i] - c1) ? 0 : 1;
      if (lab != labels[i]) {
        labels[i] = lab;
        changed = true;
      }
    }
    return changed;
  };

  assign();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double m0 = 0.0, w0 = 0.0, m1 = 0.0, w1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] == 0) {
        m0 += w[i] * sample[i];
        w0 += w[i];
      } else {
        m1 += w[i] * sample[i];
        w1 += w[i];
      }
    }
    if (w0 > 0.0) c0 = m0 / w0;  // an emptied cluster keeps its center
    if (w1 > 0.0) c1 = m1 / w1;
    if (!assign()) break;
  }

  if (c0 > c1)
    for (auto& lab : labels) lab ^= 1;
  return labels;
}

namespace detail {

UniformGrid auto_grid(std::span<const double> sample, double h,
                      std::size_t grid_size, double padding_fraction) {
  if (grid_size != 0)
    return build_grid(sample, grid_size, padding_fraction, h);
  const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
  const double range = *hi - *lo;
  const double span = range + 2.0 * (padding_fraction * range + 3.0 * h);
  std::size_t m = 1024;
  // Refine until delta <= h/10; the cap keeps heavy-tailed samples from
  // requesting absurd grids (accuracy degrades gracefully past it).
  while (span / double(m - 1) > h / 10.0 && m < (std::size_t{1} << 20)) m <<= 1;
  return build_grid(sample, m, padding_fraction, h);
}

std::vector<double> bernoulli_split(std::size_t n, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  std::vector<double> r(n);
  for (int attempt = 0; attempt < 100; ++attempt) {
    bool any0 = false, any1 = false;
    for (auto& ri : r) {
      ri = rng.bernoulli_half() ? 1.0 : 0.0;
      (ri == 1.0 ? any1 : any0) = true;
    }
    if (any0 && any1) return r;
  }
  // Astronomically unlikely for n >= 10; fall back to an alternating split.
  for (std::size_t i = 0; i < n; ++i) r[i] = double(i & 1);
  return r;
}

WeightedEmResult run_weighted_em(std::span<const double> sample,
                                 std::span<const double> case_weights,
                                 std::span<const double> r0,
                                 const WeightedEmOptions& options,
                                 BackgroundModel& background) {
  const std::size_t n = sample.size();
  if (case_weights.size() != n || r0.size() != n)
    throw std::invalid_argument("length mismatch");
  double total = 0.0;
  for (double w : case_weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-8)
    throw std::invalid_argument("case weights must sum to 1");
  for (double ri : r0)
    if (!(ri >= 0.0 && ri <= 1.0))
      throw std::invalid_argument("responsibilities outside [0,1]");

  const double sigma_floor = 1e-6 * sample_range(sample);

  std::vector<double> r(r0.begin(), r0.end());
  auto ms = weighted_m_step(sample, case_weights, r, options.alpha_min,
                            sigma_floor);
  double alpha = ms.alpha;
  ParametricFamily theta = ms.theta;

  WeightedEmResult result;
  std::vector<double> omega(n), fbg;
  double prev = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t t = 0; t < options.max_iterations; ++t) {
    // Background refresh: omega_i proportional to w_i * (1 - r_i).
    double smass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      omega[i] = case_weights[i] * (1.0 - r[i]);
      smass += omega[i];
    }
    if (smass > 0.0) {
      for (auto& o : omega) o /= smass;
    } else {
      // All mass claimed by the parametric side; keep the background at the
      // case-weight profile instead of dividing by zero.
      std::copy(case_weights.begin(), case_weights.end(), omega.begin());
    }
    fbg = background.refresh(omega);

    // E-step.
    for (std::size_t i = 0; i < n; ++i) {
      const double num = alpha * theta.density(sample[i]);
      const double den =
          num + (1.0 - alpha) * std::max(fbg[i], kDensityFloor);
      r[i] = num / den;
    }

    // M-step.
    ms = weighted_m_step(sample, case_weights, r, options.alpha_min,
                         sigma_floor);
    alpha = ms.alpha;
    theta = ms.theta;

    // Working log-likelihood of the updated parameters against the background
    // from this refresh (one step behind the parameters, as in the
    // alternating scheme).
    double loglik = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mix = alpha * theta.density(sample[i]) +
                         (1.0 - alpha) * std::max(fbg[i], kDensityFloor);
      loglik += case_weights[i] * std::log(mix);
    }
    result.loglik_trace.push_back(loglik);
    result.iterations = t + 1;

    if (t >= 1 && std::abs(loglik - prev) < options.tol) {
      result.converged = true;
      break;
    }
    prev = loglik;
  }

  result.alpha = alpha;
  result.theta = theta;
  result.responsibilities = std::move(r);
  result.background = background.snapshot();
  return result;
}

}  // namespace detail

TwoComponentFit fit_two_component(std::span<const double> sample,
                                  const EmConfig& config) {
  const auto r0 = detail::bernoulli_split(sample.size(), config.seed);
  return fit_two_component(sample, config, r0);
}

TwoComponentFit fit_two_component(std::span<const double> sample,
                                  const EmConfig& config,
                                  std::span<const double> initial_responsibilities) {
  const auto prep = prepare(sample, config);
  FftBackground model(sample, prep.h, Kernel::gaussian(), prep.grid);
  return fit_with_model(sample, config, initial_responsibilities, model);
}

DualInitFit fit_dual_init(std::span<const double> sample,
                          const EmConfig& config) {
  const auto labels = two_means_labels(sample);
  std::vector<double> r_a(sample.size()), r_b(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    r_a[i] = labels[i] == 0 ? 1.0 : 0.0;
    r_b[i] = 1.0 - r_a[i];
  }

  std::optional<TwoComponentFit> fit_a, fit_b;
  std::exception_ptr first_error;
  try {
    fit_a = fit_two_component(sample, config, r_a);
  } catch (...) {
    first_error = std::current_exception();
  }
  try {
    fit_b = fit_two_component(sample, config, r_b);
  } catch (...) {
    if (!first_error) first_error = std::current_exception();
  }
  if (!fit_a && !fit_b) std::rethrow_exception(first_error);
  if (!fit_a) return {std::move(*fit_b), TwoComponentFit{}};
  if (!fit_b) return {std::move(*fit_a), TwoComponentFit{}};

  if (fit_a->pi0 >= fit_b->pi0)
    return {std::move(*fit_a), std::move(*fit_b)};
  return {std::move(*fit_b), std::move(*fit_a)};
}

TwoComponentFit fit_with_dual_init(std::span<const double> sample,
                                   const EmConfig& config) {
  return fit_dual_init(sample, config).selected;
}

TwoComponentFit fit_vanilla_em(std::span<const double> sample,
                               const EmConfig& config) {
  const auto r0 = detail::bernoulli_split(sample.size(), config.seed);
  return fit_vanilla_em(sample, config, r0);
}

TwoComponentFit fit_vanilla_em(std::span<const double> sample,
                               const EmConfig& config,
                               std::span<const double> initial_responsibilities) {
  const auto prep = prepare(sample, config);
  DirectBackground model(sample, prep.h, Kernel::gaussian(), prep.grid);
  return fit_with_model(sample, config, initial_responsibilities, model);
}

}  // namespace peakfit
