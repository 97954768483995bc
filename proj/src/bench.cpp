#include "peakfit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace peakfit {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string host_environment() {
  std::ostringstream out;
#if defined(__clang__)
  out << "clang " << __clang_major__ << "." << __clang_minor__;
#elif defined(__GNUC__)
  out << "gcc " << __GNUC__ << "." << __GNUC_MINOR__;
#else
  out << "unknown compiler";
#endif
#ifdef NDEBUG
  out << ", release";
#else
  out << ", debug";
#endif
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos)
        out << "," << line.substr(colon + 1);
      break;
    }
  }
  return out.str();
}

template <typename Fit>
std::pair<double, TwoComponentFit> timed(Fit&& fit) {
  const auto start = Clock::now();
  TwoComponentFit result = fit();
  const auto stop = Clock::now();
  return {std::chrono::duration<double>(stop - start).count(),
          std::move(result)};
}

}  // namespace

BenchReport run_benchmark(std::span<const std::size_t> sizes,
                          const MixtureSpec& spec, const EmConfig& config,
                          const BenchOptions& options) {
  if (options.repeats < 3)
    throw std::invalid_argument("benchmark needs at least 3 repeats");
  spec.validate();

  BenchReport report;
  report.environment = host_environment();

  for (std::size_t n : sizes) {
    const auto sample =
        sample_mixture(spec, n, options.seed ^ (std::uint64_t(n) << 20));
    const auto r0 = detail::bernoulli_split(n, config.seed);

    auto fft_run = [&] { return fit_two_component(sample, config, r0); };
    auto vanilla_run = [&] { return fit_vanilla_em(sample, config, r0); };

    std::vector<double> fft_times, vanilla_times;
    TwoComponentFit fft_fit, vanilla_fit;

    auto time_engine = [&](auto&& engine, std::vector<double>& times,
                           TwoComponentFit& keep) {
      if (options.parallel_repeats) {
        std::vector<std::future<std::pair<double, TwoComponentFit>>> futures;
        futures.reserve(options.repeats);
        for (std::size_t rep = 0; rep < options.repeats; ++rep)
          futures.push_back(
              std::async(std::launch::async, [&] { return timed(engine); }));
        for (auto& f : futures) {
          auto [secs, fit] = f.get();
          times.push_back(secs);
          keep = std::move(fit);
        }
      } else {
        for (std::size_t rep = 0; rep < options.repeats; ++rep) {
          auto [secs, fit] = timed(engine);
          times.push_back(secs);
          keep = std::move(fit);
        }
      }
    };

    time_engine(fft_run, fft_times, fft_fit);
    time_engine(vanilla_run, vanilla_times, vanilla_fit);

    BenchRow row;
    row.n = n;
    row.fft_seconds = median(std::move(fft_times));
    row.vanilla_seconds = median(std::move(vanilla_times));
    row.speedup =
        row.fft_seconds > 0.0 ? row.vanilla_seconds / row.fft_seconds : 0.0;
    row.fft_iterations = fft_fit.iterations;
    row.vanilla_iterations = vanilla_fit.iterations;
    row.fft_mu = fft_fit.theta.mu;
    row.vanilla_mu = vanilla_fit.theta.mu;
    row.fft_converged = fft_fit.converged;
    row.vanilla_converged = vanilla_fit.converged;
    report.rows.push_back(row);
  }
  return report;
}

std::string bench_to_csv(const BenchReport& report) {
  std::ostringstream out;
  out.precision(9);
  out << "n,fft_seconds,vanilla_seconds,speedup,fft_iters,vanilla_iters\n";
  for (const auto& row : report.rows)
    out << row.n << ',' << row.fft_seconds << ',' << row.vanilla_seconds
        << ',' << row.speedup << ',' << row.fft_iterations << ','
        << row.vanilla_iterations << '\n';
  return out.str();
}

std::string bench_to_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows)
    rows.push_back({{"n", row.n},
                    {"fft_seconds", row.fft_seconds},
                    {"vanilla_seconds", row.vanilla_seconds},
                    {"speedup", row.speedup},
                    {"fft_iters", row.fft_iterations},
                    {"vanilla_iters", row.vanilla_iterations},
                    {"fft_mu", row.fft_mu},
                    {"vanilla_mu", row.vanilla_mu},
                    {"fft_converged", row.fft_converged},
                    {"vanilla_converged", row.vanilla_converged}});
  nlohmann::json j = {{"report_version", 1},
                      {"command", "bench"},
                      {"environment", report.environment},
                      {"rows", std::move(rows)}};
  return j.dump(2);
}

std::vector<ScalingRow> scaling_probe(
    std::span<const std::size_t> grid_sizes,
    std::span<const std::size_t> sample_sizes) {
  const Kernel kernel = Kernel::gaussian();
  std::vector<ScalingRow> rows;

  auto best_of = [](auto&& body) {
    double best = 1e300;
    // Warm up once, then keep the fastest of repeated runs; the minimum is
    // the stablest statistic for sub-millisecond work.
    body();
    for (int rep = 0; rep < 31; ++rep) {
      const auto start = Clock::now();
      body();
      const auto stop = Clock::now();
      best = std::min(best,
                      std::chrono::duration<double>(stop - start).count());
    }
    return best;
  };

  const std::size_t fixed_n = 5000;
  MixtureSpec spec{{{0.6, ComponentFamily::Gaussian, 10.0, 1.0},
                    {0.4, ComponentFamily::Gaussian, 15.0, 1.0}}};
  const auto sample_m = sample_mixture(spec, fixed_n, 7);
  const std::vector<double> weights_m(fixed_n, 1.0 / double(fixed_n));
  const Bandwidth h = silverman_bandwidth(sample_m);

  for (std::size_t m : grid_sizes) {
    const auto grid = build_grid(sample_m, m, 0.0, h.value());
    const double secs = best_of([&] {
      volatile double sink =
          weighted_kde_fft(sample_m, weights_m, h, kernel, grid).values[0];
      (void)sink;
    });
    rows.push_back({"grid_size", m, secs});
  }

  const std::size_t fixed_m = 1024;
  for (std::size_t n : sample_sizes) {
    const auto sample = sample_mixture(spec, n, 11);
    const std::vector<double> weights(n, 1.0 / double(n));
    const Bandwidth hn = silverman_bandwidth(sample);
    const auto grid = build_grid(sample, fixed_m, 0.0, hn.value());
    const double secs = best_of([&] {
      volatile double sink =
          weighted_kde_fft(sample, weights, hn, kernel, grid).values[0];
      (void)sink;
    });
    rows.push_back({"n", n, secs});
  }
  return rows;
}

}  // namespace peakfit
