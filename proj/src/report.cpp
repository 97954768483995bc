#include "peakfit/report.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <stdexcept>

#include "json.hpp"

namespace peakfit {

using nlohmann::json;

namespace {

json to_json(const InputSummary& s) {
  return {{"n", s.n}, {"min", s.min}, {"max", s.max}, {"hash", s.hash}};
}

InputSummary input_from_json(const json& j) {
  InputSummary s;
  s.n = j.at("n").get<std::size_t>();
  s.min = j.at("min").get<double>();
  s.max = j.at("max").get<double>();
  s.hash = j.at("hash").get<std::string>();
  return s;
}

json to_json(const ConfigEcho& c) {
  return {{"bandwidth", c.bandwidth},
          {"grid_size", c.grid_size},
          {"delta", c.delta},
          {"tol", c.tol},
          {"max_iterations", c.max_iterations},
          {"seed", c.seed},
          {"dual_init", c.dual_init}};
}

ConfigEcho config_from_json(const json& j) {
  ConfigEcho c;
  c.bandwidth = j.at("bandwidth").get<double>();
  c.grid_size = j.at("grid_size").get<std::size_t>();
  c.delta = j.at("delta").get<double>();
  c.tol = j.at("tol").get<double>();
  c.max_iterations = j.at("max_iterations").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.dual_init = j.at("dual_init").get<bool>();
  return c;
}

}  // namespace

std::string fingerprint(std::span<const double> values) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (double v : values) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      hash ^= (bits >> (8 * b)) & 0xffULL;
      hash *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string("fnv1a:") + buf;
}

InputSummary summarize_input(std::span<const double> values) {
  InputSummary s;
  s.n = values.size();
  if (!values.empty()) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
  }
  s.hash = fingerprint(values);
  return s;
}

std::string stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::max_stages: return "max_stages";
    case StopReason::mass_exhausted: return "mass_exhausted";
    case StopReason::stage_failed: return "stage_failed";
  }
  return "unknown";
}

std::string to_json_string(const FitReport& report, int indent) {
  json j;
  j["report_version"] = report.report_version;
  j["command"] = report.command;
  j["input"] = to_json(report.input);
  j["config"] = to_json(report.config);

  if (report.two_component) {
    const auto& r = *report.two_component;
    j["result"] = {{"type", "two_component"},
                   {"pi0", r.pi0},
                   {"mu", r.mu},
                   {"sigma", r.sigma},
                   {"iterations", r.iterations},
                   {"converged", r.converged},
                   {"final_loglik", r.final_loglik}};
  } else if (report.sequential) {
    const auto& r = *report.sequential;
    json stages = json::array();
    for (const auto& s : r.stages)
      stages.push_back({{"stage", s.stage},
                        {"mu", s.mu},
                        {"sigma", s.sigma},
                        {"alpha_within_stage", s.alpha_within_stage},
                        {"alpha_global", s.alpha_global},
                        {"iterations", s.iterations},
                        {"converged", s.converged}});
    j["result"] = {{"type", "sequential"},
                   {"stages", std::move(stages)},
                   {"total_parametric_mass", r.total_parametric_mass},
                   {"stop_reason", r.stop_reason}};
  }

  if (report.density) {
    j["density"] = {{"nodes", report.density->nodes},
                    {"background", report.density->background},
                    {"mixture", report.density->mixture}};
  }
  return j.dump(indent);
}

FitReport fit_report_from_json(const std::string& text) {
  const json j = json::parse(text);
  FitReport report;
  report.report_version = j.at("report_version").get<int>();
  if (report.report_version != kReportVersion)
    throw std::runtime_error("unsupported report_version");
  report.command = j.at("command").get<std::string>();
  report.input = input_from_json(j.at("input"));
  report.config = config_from_json(j.at("config"));

  if (j.contains("result")) {
    const auto& r = j.at("result");
    const auto type = r.at("type").get<std::string>();
    if (type == "two_component") {
      TwoComponentReport t;
      t.pi0 = r.at("pi0").get<double>();
      t.mu = r.at("mu").get<double>();
      t.sigma = r.at("sigma").get<double>();
      t.iterations = r.at("iterations").get<std::size_t>();
      t.converged = r.at("converged").get<bool>();
      t.final_loglik = r.at("final_loglik").get<double>();
      report.two_component = t;
    } else if (type == "sequential") {
      SequentialReport q;
      for (const auto& s : r.at("stages")) {
        StageReport sr;
        sr.stage = s.at("stage").get<std::size_t>();
        sr.mu = s.at("mu").get<double>();
        sr.sigma = s.at("sigma").get<double>();
        sr.alpha_within_stage = s.at("alpha_within_stage").get<double>();
        sr.alpha_global = s.at("alpha_global").get<double>();
        sr.iterations = s.at("iterations").get<std::size_t>();
        sr.converged = s.at("converged").get<bool>();
        q.stages.push_back(sr);
      }
      q.total_parametric_mass = r.at("total_parametric_mass").get<double>();
      q.stop_reason = r.at("stop_reason").get<std::string>();
      report.sequential = q;
    } else {
      throw std::runtime_error("unknown result type: " + type);
    }
  }

  if (j.contains("density")) {
    DensityDump d;
    d.nodes = j.at("density").at("nodes").get<std::vector<double>>();
    d.background = j.at("density").at("background").get<std::vector<double>>();
    d.mixture = j.at("density").at("mixture").get<std::vector<double>>();
    report.density = std::move(d);
  }
  return report;
}

// Mixture grammar -----------------------------------------------------------

namespace {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  MixtureSpec parse() {
    MixtureSpec spec;
    spec.components.push_back(component());
    skip_ws();
    while (!done()) {
      expect(',', "','");
      spec.components.push_back(component());
      skip_ws();
    }
    spec.validate();
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    throw std::invalid_argument("mixture spec: expected " + expected +
                                " at position " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }

  void expect(char c, const std::string& what) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(what);
    ++pos_;
  }

  double number(const std::string& what) {
    skip_ws();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{}) fail(what);
    pos_ += std::size_t(res.ptr - begin);
    return value;
  }

  MixtureComponent component() {
    MixtureComponent c{};
    c.weight = number("a weight");
    expect(':', "':'");
    skip_ws();
    if (pos_ >= text_.size()) fail("a family (N or C)");
    const char fam = text_[pos_];
    if (fam == 'N')
      c.family = ComponentFamily::Gaussian;
    else if (fam == 'C')
      c.family = ComponentFamily::Cauchy;
    else
      fail("a family (N or C)");
    ++pos_;
    expect('(', "'('");
    c.location = number("a location");
    expect(',', "','");
    c.scale = number("a scale");
    expect(')', "')'");
    return c;
  }

  std::string_view text_;
  std::size_t pos_{0};
};

}  // namespace

MixtureSpec parse_mixture_spec(std::string_view text) {
  return SpecParser(text).parse();
}

}  // namespace peakfit
