#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace peakfit {

enum class ComponentFamily { Gaussian, Cauchy };

struct MixtureComponent {
  double weight;
  ComponentFamily family;
  double location;
  double scale;
};

struct MixtureSpec {
  std::vector<MixtureComponent> components;

  // Throws when weights are outside (0,1], do not sum to 1 within 1e-12, or
  // any scale is nonpositive.
  void validate() const;
};

struct LabeledSample {
  std::vector<double> values;
  std::vector<std::size_t> labels;  // component index per draw
};

// Deterministic draws: one open uniform picks the component by inverse CDF on
// the weights, then Gaussian draws use Box-Muller (two uniforms) and Cauchy
// draws the tangent transform (one uniform). Same (spec, n, seed) always
// yields bit-identical output.
std::vector<double> sample_mixture(const MixtureSpec& spec, std::size_t n,
                                   std::uint64_t seed);
LabeledSample sample_mixture_labeled(const MixtureSpec& spec, std::size_t n,
                                     std::uint64_t seed);

struct Dataset {
  std::string name;
  std::vector<double> values;  // transform already applied
  std::string provenance;
  std::string transform;  // "none" when values are raw
};

// Bundled reference datasets: "snapper", "newcomb", "shoshoni", "rainfall",
// "iris_petal_length". Unknown names throw.
Dataset load_dataset(std::string_view name);
std::vector<std::string> dataset_names();

}  // namespace peakfit
