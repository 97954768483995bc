#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "peakfit/sequential.hpp"
#include "peakfit/simulate.hpp"

namespace peakfit {

inline constexpr int kReportVersion = 1;

struct InputSummary {
  std::size_t n{0};
  double min{0.0};
  double max{0.0};
  std::string hash;  // fnv1a over the raw double bytes
};

struct ConfigEcho {
  double bandwidth{0.0};
  std::size_t grid_size{0};
  double delta{0.0};
  double tol{0.0};
  std::size_t max_iterations{0};
  std::uint64_t seed{0};
  bool dual_init{true};
};

struct TwoComponentReport {
  double pi0{0.0};
  double mu{0.0};
  double sigma{0.0};
  std::size_t iterations{0};
  bool converged{false};
  double final_loglik{0.0};
};

struct StageReport {
  std::size_t stage{1};
  double mu{0.0};
  double sigma{0.0};
  double alpha_within_stage{0.0};
  double alpha_global{0.0};
  std::size_t iterations{0};
  bool converged{false};
};

struct SequentialReport {
  std::vector<StageReport> stages;
  double total_parametric_mass{0.0};
  std::string stop_reason;
};

struct DensityDump {
  std::vector<double> nodes;
  std::vector<double> background;
  std::vector<double> mixture;
};

struct FitReport {
  int report_version{kReportVersion};
  std::string command;
  InputSummary input;
  ConfigEcho config;
  std::optional<TwoComponentReport> two_component;
  std::optional<SequentialReport> sequential;
  std::optional<DensityDump> density;
};

std::string to_json_string(const FitReport& report, int indent = 2);
FitReport fit_report_from_json(const std::string& text);

InputSummary summarize_input(std::span<const double> values);
std::string fingerprint(std::span<const double> values);

std::string stop_reason_name(StopReason reason);

// Mixture mini-grammar: comma-separated "weight:Family(loc,scale)" terms with
// Family one of N (Gaussian) or C (Cauchy); whitespace-insensitive. Errors
// name the byte position and the expected token.
MixtureSpec parse_mixture_spec(std::string_view text);

}  // namespace peakfit
