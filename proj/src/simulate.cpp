#include "peakfit/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "peakfit/rng.hpp"

namespace peakfit {

void MixtureSpec::validate() const {
  if (components.empty())
    throw std::invalid_argument("mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0 && c.weight <= 1.0))
      throw std::invalid_argument("component weight outside (0,1]");
    if (!(c.scale > 0.0) || !std::isfinite(c.scale))
      throw std::invalid_argument("component scale must be positive");
    if (!std::isfinite(c.location))
      throw std::invalid_argument("non-finite input");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("weights must sum to 1");
}

LabeledSample sample_mixture_labeled(const MixtureSpec& spec, std::size_t n,
                                     std::uint64_t seed) {
  spec.validate();
  Xoshiro256pp rng(seed);

  LabeledSample out;
  out.values.resize(n);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform_open();
    double cum = 0.0;
    std::size_t k = spec.components.size() - 1;
    for (std::size_t j = 0; j < spec.components.size(); ++j) {
      cum += spec.components[j].weight;
      if (u <= cum) {
        k = j;
        break;
      }
    }
    const auto& c = spec.components[k];
    out.labels[i] = k;
    out.values[i] = c.family == ComponentFamily::Gaussian
                        ? rng.normal(c.location, c.scale)
                        : rng.cauchy(c.location, c.scale);
  }
  return out;
}

std::vector<double> sample_mixture(const MixtureSpec& spec, std::size_t n,
                                   std::uint64_t seed) {
  return sample_mixture_labeled(spec, n, seed).values;
}

}  // namespace peakfit
