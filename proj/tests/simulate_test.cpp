#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "peakfit/rng.hpp"
#include "peakfit/simulate.hpp"

using namespace peakfit;

TEST_CASE("splitmix64 matches the published reference outputs") {
  // First three outputs from state 0 of the Steele/Lea/Vigna reference code.
  std::uint64_t state = 0;
  CHECK(splitmix64_next(state) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64_next(state) == 0x6E789E6AA1B965F4ULL);
  CHECK(splitmix64_next(state) == 0x06C45D188009454FULL);
}

TEST_CASE("xoshiro stream is deterministic and uniform-ish") {
  Xoshiro256pp a(12345), b(12345), c(54321);
  bool all_equal = true, any_diff = false;
  double acc = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double ua = a.uniform();
    all_equal = all_equal && ua == b.uniform();
    any_diff = any_diff || ua != c.uniform();
    acc += ua;
  }
  CHECK(all_equal);
  CHECK(any_diff);
  CHECK(acc / 10000.0 == doctest::Approx(0.5).epsilon(0.02));

  Xoshiro256pp open(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = open.uniform_open();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("mixture sampling is bitwise reproducible") {
  MixtureSpec spec;
  spec.components = {{0.6, ComponentFamily::Gaussian, 10.0, 1.0},
                     {0.4, ComponentFamily::Gaussian, 15.0, 1.0}};
  const auto first = sample_mixture(spec, 1000, 99);
  const auto second = sample_mixture(spec, 1000, 99);
  CHECK(first == second);
  const auto other_seed = sample_mixture(spec, 1000, 100);
  CHECK(first != other_seed);
}

TEST_CASE("a large single-gaussian sample obeys the law of large numbers") {
  MixtureSpec spec;
  spec.components = {{1.0, ComponentFamily::Gaussian, 0.0, 1.0}};
  const auto y = sample_mixture(spec, 100000, 1);

  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / double(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / double(y.size() - 1));
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(sd - 1.0) < 0.02);
}

TEST_CASE("component labels land near the specified proportions") {
  MixtureSpec spec;
  spec.components = {{0.6, ComponentFamily::Gaussian, 10.0, 1.0},
                     {0.4, ComponentFamily::Gaussian, 15.0, 1.0}};
  const auto labeled = sample_mixture_labeled(spec, 100000, 42);
  REQUIRE(labeled.values.size() == labeled.labels.size());

  const auto from_first =
      std::count(labeled.labels.begin(), labeled.labels.end(), std::size_t(0));
  CHECK(std::abs(double(from_first) / 100000.0 - 0.6) < 0.005);

  // labels really do pick the component: conditional means sit apart
  double m0 = 0.0, m1 = 0.0;
  std::size_t n0 = 0, n1 = 0;
  for (std::size_t i = 0; i < labeled.values.size(); ++i) {
    if (labeled.labels[i] == 0) {
      m0 += labeled.values[i];
      ++n0;
    } else {
      m1 += labeled.values[i];
      ++n1;
    }
  }
  CHECK(m0 / double(n0) == doctest::Approx(10.0).epsilon(0.01));
  CHECK(m1 / double(n1) == doctest::Approx(15.0).epsilon(0.01));
}

TEST_CASE("labeled and unlabeled draws agree") {
  MixtureSpec spec;
  spec.components = {{0.5, ComponentFamily::Gaussian, 0.0, 1.0},
                     {0.5, ComponentFamily::Cauchy, 5.0, 2.0}};
  const auto values = sample_mixture(spec, 500, 7);
  const auto labeled = sample_mixture_labeled(spec, 500, 7);
  CHECK(values == labeled.values);
}

TEST_CASE("cauchy draws have heavy tails") {
  MixtureSpec spec;
  spec.components = {{1.0, ComponentFamily::Cauchy, 0.0, 1.0}};
  const auto y = sample_mixture(spec, 20000, 3);
  const auto wild =
      std::count_if(y.begin(), y.end(), [](double v) { return std::abs(v) > 20.0; });
  // P(|C| > 20) = 2/pi * atan(1/20) ~ 0.0318
  CHECK(double(wild) / double(y.size()) == doctest::Approx(0.0318).epsilon(0.25));
}

TEST_CASE("mixture specs are validated") {
  MixtureSpec bad_weights;
  bad_weights.components = {{0.5, ComponentFamily::Gaussian, 0.0, 1.0},
                            {0.4, ComponentFamily::Gaussian, 5.0, 1.0}};
  CHECK_THROWS_WITH_AS(bad_weights.validate(), "weights must sum to 1",
                       std::invalid_argument);

  MixtureSpec bad_scale;
  bad_scale.components = {{1.0, ComponentFamily::Gaussian, 0.0, 0.0}};
  CHECK_THROWS_AS(bad_scale.validate(), std::invalid_argument);

  MixtureSpec empty;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
  CHECK_THROWS_AS(sample_mixture(bad_weights, 10, 1), std::invalid_argument);
}

TEST_CASE("bundled datasets load with the documented shapes") {
  const auto newcomb = load_dataset("newcomb");
  CHECK(newcomb.values.size() == 66);
  CHECK(*std::min_element(newcomb.values.begin(), newcomb.values.end()) == 0.0);
  CHECK(newcomb.transform == "shift +44");

  const auto shoshoni = load_dataset("shoshoni");
  CHECK(shoshoni.values.size() == 20);
  for (double v : shoshoni.values) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }

  const auto iris = load_dataset("iris_petal_length");
  REQUIRE(iris.values.size() == 150);
  auto species_mean = [&](std::size_t from) {
    return std::accumulate(iris.values.begin() + std::ptrdiff_t(from),
                           iris.values.begin() + std::ptrdiff_t(from) + 50,
                           0.0) /
           50.0;
  };
  CHECK(species_mean(0) == doctest::Approx(1.46).epsilon(0.02));
  CHECK(species_mean(50) == doctest::Approx(4.26).epsilon(0.02));
  CHECK(species_mean(100) == doctest::Approx(5.55).epsilon(0.02));

  const auto snapper = load_dataset("snapper");
  CHECK(snapper.values.size() == 256);
  CHECK(snapper.provenance.find("econstruction") != std::string::npos);

  const auto rainfall = load_dataset("rainfall");
  CHECK(rainfall.transform == "cube root");
  // the ~300 mm accumulation arrives on the cube-root scale
  const double top =
      *std::max_element(rainfall.values.begin(), rainfall.values.end());
  CHECK(top == doctest::Approx(std::cbrt(300.4)).epsilon(1e-12));
  CHECK(rainfall.provenance.find("econstruction") != std::string::npos);

  CHECK_THROWS_AS(load_dataset("nope"), std::invalid_argument);
  CHECK(dataset_names().size() == 5);
}
