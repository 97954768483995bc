#include "peakfit/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace peakfit {

namespace {

// Newcomb's 1882 passage-time measurements for light over 7442 m, coded as
// (time - 24800) ns; 66 values including the famous low outliers -44 and -2.
// Transcribed from Stigler (1977), Table 5.
constexpr double kNewcomb[] = {
    28, 26, 33, 24, 34, -44, 27, 16, 40, -2, 29, 22, 24, 21, 25, 30, 23,
    29, 31, 19, 24, 20, 36,  32, 36, 28, 25, 21, 28, 29, 37, 25, 28, 26,
    30, 32, 36, 26, 30, 22,  36, 23, 27, 27, 28, 27, 31, 27, 26, 33, 26,
    32, 32, 24, 39, 28, 24,  25, 32, 25, 29, 27, 28, 29, 16, 23};

// Width-to-length ratios of 20 beaded rectangles sewn by Shoshoni artisans;
// DuBois (1960), widely reprinted (e.g. Larsen & Marx). Often compared with
// the golden ratio 0.618.
constexpr double kShoshoni[] = {
    0.693, 0.662, 0.690, 0.606, 0.570, 0.749, 0.672, 0.628, 0.609, 0.844,
    0.654, 0.615, 0.668, 0.601, 0.576, 0.670, 0.606, 0.611, 0.553, 0.933};

// Petal length (cm) for all 150 flowers of Fisher's iris data, in the usual
// row order: setosa, versicolor, virginica (50 each; species means 1.462,
// 4.260, 5.552).
constexpr double kIrisPetalLength[] = {
    1.4, 1.4, 1.3, 1.5, 1.4, 1.7, 1.4, 1.5, 1.4, 1.5, 1.5, 1.6, 1.4, 1.1,
    1.2, 1.5, 1.3, 1.4, 1.7, 1.5, 1.7, 1.5, 1.0, 1.7, 1.9, 1.6, 1.6, 1.5,
    1.4, 1.6, 1.6, 1.5, 1.5, 1.4, 1.5, 1.2, 1.3, 1.4, 1.3, 1.5, 1.3, 1.3,
    1.3, 1.6, 1.9, 1.4, 1.6, 1.4, 1.5, 1.4, 4.7, 4.5, 4.9, 4.0, 4.6, 4.5,
    4.7, 3.3, 4.6, 3.9, 3.5, 4.2, 4.0, 4.7, 3.6, 4.4, 4.5, 4.1, 4.5, 3.9,
    4.8, 4.0, 4.9, 4.7, 4.3, 4.4, 4.8, 5.0, 4.5, 3.5, 3.8, 3.7, 3.9, 5.1,
    4.5, 4.5, 4.7, 4.4, 4.1, 4.0, 4.4, 4.6, 4.0, 3.3, 4.2, 4.2, 4.2, 4.3,
    3.0, 4.1, 6.0, 5.1, 5.9, 5.6, 5.8, 6.6, 4.5, 6.3, 5.8, 6.1, 5.1, 5.3,
    5.5, 5.0, 5.1, 5.3, 5.5, 6.7, 6.9, 5.0, 5.7, 4.9, 6.7, 4.9, 5.7, 6.0,
    4.8, 4.9, 5.6, 5.8, 6.1, 6.4, 5.6, 5.1, 5.6, 6.1, 5.6, 5.5, 4.8, 5.4,
    5.6, 5.1, 5.1, 5.9, 5.7, 5.2, 5.0, 5.2, 5.4, 5.1};

// Fork lengths (inches) of 256 Tasman Bay snapper, after Cassie (1954), whose
// length-frequency sample resolves into age-group modes near 5.4, 7.5, 9.7
// and 11 inches. The original appendix table was not available when this
// table was assembled; these values are a reconstruction drawn from the
// published modal structure (weights 0.50/0.28/0.14/0.08, measurements to
// the nearest 0.05 in) and are flagged as such.
constexpr double kSnapper[] = {
    4.30,  4.30,  4.45,  4.45, 4.45, 4.50, 4.55, 4.60, 4.60, 4.70, 4.75,
    4.75,  4.75,  4.75,  4.80, 4.80, 4.80, 4.80, 4.80, 4.85, 4.85, 4.85,
    4.85,  4.85,  4.90,  4.95, 4.95, 4.95, 4.95, 4.95, 5.00, 5.00, 5.00,
    5.00,  5.00,  5.00,  5.05, 5.05, 5.10, 5.10, 5.15, 5.15, 5.15, 5.15,
    5.20,  5.20,  5.20,  5.25, 5.25, 5.25, 5.25, 5.25, 5.25, 5.30, 5.30,
    5.30,  5.35,  5.35,  5.35, 5.35, 5.40, 5.40, 5.40, 5.40, 5.40, 5.45,
    5.45,  5.45,  5.50,  5.50, 5.55, 5.55, 5.55, 5.55, 5.55, 5.60, 5.60,
    5.60,  5.60,  5.65,  5.65, 5.65, 5.70, 5.70, 5.70, 5.70, 5.75, 5.75,
    5.75,  5.75,  5.80,  5.80, 5.80, 5.80, 5.85, 5.85, 5.85, 5.85, 5.85,
    5.85,  5.90,  5.90,  5.90, 5.90, 5.95, 5.95, 5.95, 5.95, 5.95, 5.95,
    6.05,  6.10,  6.15,  6.15, 6.15, 6.15, 6.20, 6.25, 6.25, 6.25, 6.30,
    6.30,  6.35,  6.40,  6.40, 6.40, 6.45, 6.50, 6.55, 6.60, 6.65, 6.75,
    6.80,  6.80,  6.90,  6.95, 6.95, 6.95, 7.05, 7.10, 7.15, 7.20, 7.20,
    7.20,  7.25,  7.30,  7.35, 7.35, 7.35, 7.35, 7.35, 7.35, 7.35, 7.35,
    7.40,  7.45,  7.45,  7.45, 7.50, 7.50, 7.55, 7.55, 7.60, 7.60, 7.65,
    7.65,  7.65,  7.70,  7.70, 7.70, 7.70, 7.75, 7.75, 7.80, 7.85, 7.85,
    7.90,  7.90,  7.90,  7.95, 7.95, 8.00, 8.00, 8.15, 8.20, 8.25, 8.40,
    8.40,  8.40,  8.45,  8.50, 8.60, 8.70, 8.70, 8.75, 8.75, 8.80, 8.85,
    8.85,  8.90,  8.90,  9.00, 9.05, 9.10, 9.15, 9.15, 9.25, 9.25, 9.25,
    9.30,  9.30,  9.30,  9.35, 9.35, 9.35, 9.35, 9.40, 9.45, 9.45, 9.50,
    9.55,  9.55,  9.60,  9.70, 9.75, 9.85, 9.85, 9.90, 9.90, 9.95, 9.95,
    10.00, 10.05, 10.05, 10.15, 10.25, 10.40, 10.40, 10.50, 10.50, 10.55,
    10.60, 10.60, 10.70, 10.80, 10.80, 10.90, 10.95, 10.95, 11.10, 11.20,
    11.20, 11.20, 11.25, 11.90, 11.95};

// Melbourne winter rainfall (mm per 4-day block, 1981-1983), after the
// rainfall example in Staudte & Sheather (1990), which carries one extreme
// accumulation near 300 mm. The printed table was not available when this
// table was assembled; these values are a reconstruction matching the
// described shape and are flagged as such. The loader reports cube roots
// (a standard variance-stabilizing scale for precipitation), on which the
// dominant peak sits near 1.24.
constexpr double kRainfallRawMm[] = {
    0.1,  0.2,  0.2,  0.3,  0.3,  0.5,  0.7,  0.7,  0.9,  1.0,  1.0,  1.2,
    1.2,  1.3,  1.5,  1.6,  1.6,  1.6,  1.7,  1.9,  2.0,  2.0,  2.1,  2.3,
    2.4,  2.5,  2.6,  2.6,  2.6,  2.6,  2.7,  2.9,  2.9,  3.2,  3.4,  3.5,
    3.5,  4.0,  4.8,  5.2,  5.6,  5.8,  7.1,  7.3,  8.7,  9.1,  10.6, 11.9,
    12.8, 13.1, 13.7, 13.8, 14.1, 14.3, 15.3, 15.6, 16.9, 17.1, 18.0, 18.4,
    20.4, 25.1, 27.5, 28.0, 34.8, 40.2, 41.7, 58.3, 300.4};

template <std::size_t N>
std::vector<double> to_vector(const double (&table)[N]) {
  return std::vector<double>(table, table + N);
}

}  // namespace

Dataset load_dataset(std::string_view name) {
  Dataset d;
  d.name = std::string(name);
  d.transform = "none";

  if (name == "newcomb") {
    d.values = to_vector(kNewcomb);
    for (auto& v : d.values) v += 44.0;
    d.provenance =
        "Newcomb 1882 light passage times, coded (time - 24800) ns; "
        "transcription after Stigler (1977). Shifted by +44 so the lowest "
        "outlier sits at 0.";
    d.transform = "shift +44";
    return d;
  }
  if (name == "shoshoni") {
    d.values = to_vector(kShoshoni);
    d.provenance =
        "Width-to-length ratios of 20 beaded rectangles made by Shoshoni "
        "artisans; DuBois (1960), as reprinted in Larsen & Marx.";
    return d;
  }
  if (name == "iris_petal_length") {
    d.values = to_vector(kIrisPetalLength);
    d.provenance =
        "Petal length (cm), Fisher/Anderson iris data, all 150 flowers "
        "(setosa, versicolor, virginica in row order).";
    return d;
  }
  if (name == "snapper") {
    d.values = to_vector(kSnapper);
    d.provenance =
        "Fork lengths (inches) of 256 Tasman Bay snapper, after Cassie "
        "(1954). Reconstruction from the published modal structure; the "
        "original appendix table was unavailable, so these values are "
        "simulated to match the reported age-group modes and flagged as "
        "a reconstruction.";
    return d;
  }
  if (name == "rainfall") {
    d.values = to_vector(kRainfallRawMm);
    for (auto& v : d.values) v = std::cbrt(v);
    d.provenance =
        "Melbourne winter rainfall (mm per 4-day block, 1981-1983), after "
        "the example in Staudte & Sheather (1990). Reconstruction: the "
        "printed table was unavailable, so raw values were simulated to "
        "match the described shape (dominant drizzle mode, one ~300 mm "
        "accumulation) and flagged as such. Values are reported on the "
        "cube-root scale.";
    d.transform = "cube root";
    return d;
  }
  throw std::invalid_argument("unknown dataset: " + std::string(name));
}

std::vector<std::string> dataset_names() {
  return {"snapper", "newcomb", "shoshoni", "rainfall", "iris_petal_length"};
}

}  // namespace peakfit
