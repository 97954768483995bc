#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "peakfit/fft_kde.hpp"
#include "peakfit/rng.hpp"

using namespace peakfit;

namespace {

// Reference O(M*L) double loop the FFT path must reproduce.
std::vector<double> naive_convolution(const BinnedWeights& binned,
                                      const KernelTaps& taps,
                                      const UniformGrid& grid) {
  std::vector<double> out(grid.m, 0.0);
  const std::ptrdiff_t radius = std::ptrdiff_t(taps.radius);
  for (std::size_t m = 0; m < grid.m; ++m) {
    double acc = 0.0;
    for (std::size_t l = 0; l < grid.m; ++l) {
      const std::ptrdiff_t lag = std::ptrdiff_t(m) - std::ptrdiff_t(l);
      if (lag < -radius || lag > radius) continue;
      acc += binned.counts[l] * taps.at(lag);
    }
    out[m] = acc;
  }
  return out;
}

BinnedWeights random_bins(std::size_t m, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  BinnedWeights b;
  b.counts.resize(m);
  double total = 0.0;
  for (auto& c : b.counts) total += (c = rng.uniform());
  for (auto& c : b.counts) c /= total;
  return b;
}

double lemma_bound(const Kernel& kernel, double delta, double h) {
  return kernel.sup_abs_second_derivative * delta * delta / (4.0 * h * h * h);
}

}  // namespace

TEST_CASE("kernel taps cover the support symmetrically") {
  const Kernel k = Kernel::gaussian();
  const KernelTaps taps = sample_kernel_taps(k, Bandwidth(0.8), 0.1);
  CHECK(taps.taps.size() == 2 * taps.radius + 1);
  CHECK(double(taps.radius) * 0.1 >= k.effective_support_radius * 0.8);
  for (std::size_t r = 0; r <= taps.radius; ++r)
    CHECK(taps.at(std::ptrdiff_t(r)) == taps.at(-std::ptrdiff_t(r)));
  CHECK(taps.at(0) == doctest::Approx(evaluate_scaled(k, Bandwidth(0.8), 0.0)));
}

TEST_CASE("convolution with an impulse reproduces the taps") {
  const Kernel k = Kernel::gaussian();
  const UniformGrid g{0.0, 0.1, 128};
  const Bandwidth h(0.3);
  const KernelTaps taps = sample_kernel_taps(k, h, g.delta);

  BinnedWeights b;
  b.counts.assign(g.m, 0.0);
  b.counts[64] = 1.0;
  const KdeEstimate kde = convolve_fft(b, taps, g, h);

  for (std::size_t m = 0; m < g.m; ++m) {
    const std::ptrdiff_t lag = std::ptrdiff_t(m) - 64;
    const double want =
        std::abs(lag) <= std::ptrdiff_t(taps.radius) ? taps.at(lag) : 0.0;
    CHECK(kde.values[m] == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("fft convolution equals the naive double loop") {
  const Kernel k = Kernel::gaussian();
  for (std::size_t m : {std::size_t(64), std::size_t(100), std::size_t(256),
                        std::size_t(1000)}) {
    const UniformGrid g{-2.0, 0.05, m};
    const Bandwidth h(0.4);
    const KernelTaps taps = sample_kernel_taps(k, h, g.delta);
    const BinnedWeights b = random_bins(m, 1000 + m);

    const KdeEstimate fft = convolve_fft(b, taps, g, h);
    const std::vector<double> naive = naive_convolution(b, taps, g);

    const double scale = *std::max_element(naive.begin(), naive.end());
    for (std::size_t i = 0; i < m; ++i)
      CHECK(std::abs(fft.values[i] - naive[i]) <= 1e-10 * scale);
  }
}

TEST_CASE("fft convolution matches the naive loop on the documented seed") {
  const Kernel k = Kernel::gaussian();
  const UniformGrid g{0.0, 0.05, 256};
  const Bandwidth h(0.5);
  const KernelTaps taps = sample_kernel_taps(k, h, g.delta);
  const BinnedWeights b = random_bins(256, 7);

  const KdeEstimate fft = convolve_fft(b, taps, g, h);
  const std::vector<double> naive = naive_convolution(b, taps, g);
  const double scale = *std::max_element(naive.begin(), naive.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < g.m; ++i)
    worst = std::max(worst, std::abs(fft.values[i] - naive[i]));
  CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("explicit fft length must leave room for the linear convolution") {
  const Kernel k = Kernel::gaussian();
  const UniformGrid g{0.0, 0.05, 256};
  const Bandwidth h(0.5);
  const KernelTaps taps = sample_kernel_taps(k, h, g.delta);
  const BinnedWeights b = random_bins(256, 7);
  // 256 nodes plus 2R extra lags cannot fit in 256 slots
  CHECK_THROWS_WITH_AS(convolve_fft(b, taps, g, h, 256),
                       "insufficient padding", std::invalid_argument);
}

TEST_CASE("evaluate_exact point values") {
  const Kernel k = Kernel::gaussian();
  const Bandwidth one(1.0);

  auto single = evaluate_exact(std::vector<double>{0.0},
                               std::vector<double>{1.0}, one, k,
                               std::vector<double>{0.0});
  CHECK(single[0] == doctest::Approx(0.3989423).epsilon(1e-6));

  auto pair = evaluate_exact(std::vector<double>{-1.0, 1.0},
                             std::vector<double>{0.5, 0.5}, one, k,
                             std::vector<double>{0.0});
  CHECK(pair[0] == doctest::Approx(0.2419707).epsilon(1e-6));

  // one-hot weights reduce the KDE to a single scaled kernel
  const std::vector<double> y{-2.0, 0.5, 3.0};
  const std::vector<double> w{0.0, 1.0, 0.0};
  const std::vector<double> queries{-1.0, 0.0, 1.0, 2.0};
  const auto vals = evaluate_exact(y, w, Bandwidth(0.7), k, queries);
  for (std::size_t i = 0; i < queries.size(); ++i)
    CHECK(vals[i] ==
          doctest::Approx(evaluate_scaled(k, Bandwidth(0.7), y[1] - queries[i])));
}

TEST_CASE("interpolation is exact on nodes and averages midpoints") {
  KdeEstimate kde;
  kde.grid = {0.0, 1.0, 5};
  kde.values = {1.0, 3.0, 2.0, 5.0, 4.0};
  kde.bandwidth = 1.0;

  CHECK(interpolate_offgrid(kde, 2.0) == 2.0);
  CHECK(interpolate_offgrid(kde, 2.5) == doctest::Approx(3.5));
  CHECK(interpolate_offgrid(kde, 4.0) == 4.0);  // last node exactly
  CHECK_THROWS_WITH_AS(interpolate_offgrid(kde, 4.5), "query off grid",
                       std::out_of_range);
  CHECK_THROWS_AS(interpolate_offgrid(kde, -0.1), std::out_of_range);
}

TEST_CASE("binned KDE stays within the curvature bound of the exact KDE") {
  // Both halves of the error budget: binning and interpolation each cost at
  // most sup|K''| * delta^2 / (8 h^3), so node values and off-grid reads stay
  // within twice that of the direct evaluator.
  const Kernel k = Kernel::gaussian();
  Xoshiro256pp rng(314);

  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 10 + std::size_t(rng.uniform() * 1990);
    std::vector<double> y(n), w(n);
    const double center = rng.uniform() * 10.0 - 5.0;
    const double spread = 0.5 + rng.uniform() * 2.0;
    for (auto& v : y) v = rng.normal(center, spread);
    double total = 0.0;
    for (auto& v : w) total += (v = rng.uniform() + 1e-4);
    for (auto& v : w) v /= total;

    const double h = 0.05 + rng.uniform() * 1.95;
    const double ratio = 0.01 + rng.uniform() * 0.49;  // delta / h
    const double delta = ratio * h;
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const double pad = k.effective_support_radius * h;
    const std::size_t m =
        std::size_t((*hi - *lo + 2 * pad) / delta) + 2;
    const UniformGrid g{*lo - pad, delta, m};

    const KdeEstimate kde = weighted_kde_fft(y, w, Bandwidth(h), k, g);
    const auto fast = interpolate_offgrid(kde, y);
    const auto exact = evaluate_exact(y, w, Bandwidth(h), k, y);

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(fast[i] - exact[i]));
    CHECK(worst <= lemma_bound(k, delta, h));
  }
}

TEST_CASE("node values alone use only the binning half of the budget") {
  const Kernel k = Kernel::gaussian();
  Xoshiro256pp rng(1);
  std::vector<double> y(500);
  for (auto& v : y) v = rng.normal();
  std::vector<double> w(y.size(), 1.0 / double(y.size()));

  const double h = silverman_bandwidth(y).value();
  const double delta = h / 10.0;
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double pad = k.effective_support_radius * h;
  const std::size_t m = std::size_t((*hi - *lo + 2 * pad) / delta) + 2;
  const UniformGrid g{*lo - pad, delta, m};

  const KdeEstimate kde = weighted_kde_fft(y, w, Bandwidth(h), k, g);
  std::vector<double> nodes(g.m);
  for (std::size_t i = 0; i < g.m; ++i) nodes[i] = g.node(i);
  const auto exact = evaluate_exact(y, w, Bandwidth(h), k, nodes);

  double worst = 0.0;
  for (std::size_t i = 0; i < g.m; ++i)
    worst = std::max(worst, std::abs(kde.values[i] - exact[i]));
  CHECK(worst <= k.sup_abs_second_derivative * delta * delta / (8.0 * h * h * h));
}

TEST_CASE("KDE values are nonnegative and integrate to about one") {
  const Kernel k = Kernel::gaussian();
  Xoshiro256pp rng(88);
  std::vector<double> y(300), w(300);
  for (auto& v : y) v = rng.normal(2.0, 1.5);
  double total = 0.0;
  for (auto& v : w) total += (v = rng.uniform());
  for (auto& v : w) v /= total;

  const double h = silverman_bandwidth(y).value();
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double pad = k.effective_support_radius * h;
  const double delta = h / 10.0;
  const std::size_t m = std::size_t((*hi - *lo + 2 * pad) / delta) + 2;
  const KdeEstimate kde =
      weighted_kde_fft(y, w, Bandwidth(h), k, {*lo - pad, delta, m});

  double riemann = 0.0;
  for (double v : kde.values) {
    CHECK(v >= 0.0);
    riemann += v * delta;
  }
  CHECK(riemann == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("a single on-node point reproduces the sampled kernel") {
  const Kernel k = Kernel::gaussian();
  const UniformGrid g{-4.0, 0.1, 81};
  const Bandwidth h(0.5);
  const KdeEstimate kde = weighted_kde_fft(
      std::vector<double>{0.0}, std::vector<double>{1.0}, h, k, g);
  for (std::size_t m = 0; m < g.m; ++m)
    CHECK(kde.values[m] ==
          doctest::Approx(evaluate_scaled(k, h, g.node(m))).epsilon(1e-9));
}

TEST_CASE("convolution engine matches the one-shot entry point") {
  const Kernel k = Kernel::gaussian();
  const UniformGrid g{-3.0, 0.05, 256};
  const Bandwidth h(0.4);
  Xoshiro256pp rng(55);
  std::vector<double> y(120);
  for (auto& v : y) v = rng.normal(0.0, 1.0) * 0.8;
  std::vector<double> w(y.size(), 1.0 / double(y.size()));

  const ConvolutionEngine engine(k, h, g);
  const KdeEstimate via_engine = engine.convolve(linear_bin(y, w, g));
  const KdeEstimate direct = weighted_kde_fft(y, w, h, k, g);
  for (std::size_t i = 0; i < g.m; ++i)
    CHECK(via_engine.values[i] == doctest::Approx(direct.values[i]).epsilon(1e-13));
}
