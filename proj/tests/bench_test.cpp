#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "peakfit/bench.hpp"

using namespace peakfit;

namespace {

const MixtureSpec kTwoBump{{{0.6, ComponentFamily::Gaussian, 10.0, 1.0},
                            {0.4, ComponentFamily::Gaussian, 15.0, 1.0}}};

EmConfig quick_config() {
  EmConfig config;
  config.max_iterations = 30;
  return config;
}

}  // namespace

TEST_CASE("benchmark rejects fewer than three repeats") {
  BenchOptions options;
  options.repeats = 2;
  const std::vector<std::size_t> sizes{100};
  CHECK_THROWS_WITH_AS(run_benchmark(sizes, kTwoBump, quick_config(), options),
                       "benchmark needs at least 3 repeats",
                       std::invalid_argument);
}

TEST_CASE("benchmark rows carry consistent timings and agreeing estimates") {
  const std::vector<std::size_t> sizes{200};
  const BenchReport report = run_benchmark(sizes, kTwoBump, quick_config());

  CHECK_FALSE(report.environment.empty());
  REQUIRE(report.rows.size() == 1);
  const BenchRow& row = report.rows[0];
  CHECK(row.n == 200);
  CHECK(row.fft_seconds > 0.0);
  CHECK(row.vanilla_seconds > 0.0);
  CHECK(row.speedup ==
        doctest::Approx(row.vanilla_seconds / row.fft_seconds).epsilon(1e-9));
  CHECK(row.fft_iterations > 0);
  CHECK(row.vanilla_iterations > 0);

  // Both engines start from the same responsibility split, so the location
  // estimates they settle on must agree closely even when the short iteration
  // cap leaves the fit itself rough.
  CHECK(std::abs(row.fft_mu - row.vanilla_mu) < 0.05);
  CHECK(row.fft_mu > 6.0);   // inside the data hull
  CHECK(row.fft_mu < 19.0);
}

TEST_CASE("parallel repeats produce the same row shape") {
  BenchOptions options;
  options.parallel_repeats = true;
  const std::vector<std::size_t> sizes{150};
  const BenchReport report =
      run_benchmark(sizes, kTwoBump, quick_config(), options);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].n == 150);
  CHECK(report.rows[0].fft_seconds > 0.0);
}

TEST_CASE("CSV and JSON serializations cover every row") {
  const std::vector<std::size_t> sizes{100, 200};
  const BenchReport report = run_benchmark(sizes, kTwoBump, quick_config());

  const std::string csv = bench_to_csv(report);
  std::istringstream stream(csv);
  std::string line;
  REQUIRE(std::getline(stream, line));
  CHECK(line == "n,fft_seconds,vanilla_seconds,speedup,fft_iters,vanilla_iters");
  std::size_t data_rows = 0;
  while (std::getline(stream, line)) {
    ++data_rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
  }
  CHECK(data_rows == 2);

  const auto j = nlohmann::json::parse(bench_to_json(report));
  CHECK(j["report_version"] == 1);
  CHECK(j["command"] == "bench");
  CHECK(j["environment"].is_string());
  REQUIRE(j["rows"].size() == 2);
  for (const auto& row : j["rows"]) {
    for (const char* key :
         {"n", "fft_seconds", "vanilla_seconds", "speedup", "fft_iters",
          "vanilla_iters", "fft_mu", "vanilla_mu", "fft_converged",
          "vanilla_converged"}) {
      CHECK_MESSAGE(row.contains(key), key);
    }
  }
}

TEST_CASE("density evaluation scales near-linearly in grid and sample size") {
  // Quadrupling the work unit should cost roughly 4x for a linearithmic
  // engine; a quadratic one would cost 16x. The factor-10 ceiling separates
  // the two regimes with plenty of headroom for timer noise.
  const std::vector<std::size_t> grids{1024, 4096, 16384, 65536};
  const std::vector<std::size_t> samples{2000, 8000, 32000};
  const auto rows = scaling_probe(grids, samples);
  REQUIRE(rows.size() == grids.size() + samples.size());

  for (std::size_t i = 0; i < grids.size(); ++i) {
    CHECK(rows[i].parameter == "grid_size");
    CHECK(rows[i].value == grids[i]);
    CHECK(rows[i].seconds > 0.0);
    if (i > 0) CHECK(rows[i].seconds / rows[i - 1].seconds < 10.0);
  }
  // 64x more grid work must dominate timer noise outright.
  CHECK(rows[0].seconds < rows[grids.size() - 1].seconds);

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& row = rows[grids.size() + i];
    CHECK(row.parameter == "n");
    CHECK(row.value == samples[i]);
    CHECK(row.seconds > 0.0);
    if (i > 0) CHECK(row.seconds / rows[grids.size() + i - 1].seconds < 10.0);
  }
}
