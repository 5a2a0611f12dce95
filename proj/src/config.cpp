#include "nonspam/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "nonspam/error.hpp"
#include "nonspam/pgm.hpp"

namespace nonspam {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, const std::string& key) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw DomainError("config key '" + key + "': '" + text + "' is not a finite number");
  }
  return value;
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& key) {
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw DomainError("config key '" + key + "': '" + text + "' is not a non-negative integer");
  }
  return value;
}

template <class Enum>
Enum parse_choice(const std::string& text, const std::string& key, const std::map<std::string, Enum>& choices) {
  if (auto it = choices.find(text); it != choices.end()) return it->second;
  std::string allowed;
  for (const auto& [name, value] : choices) allowed += (allowed.empty() ? "" : ", ") + name;
  throw DomainError("config key '" + key + "': '" + text + "' is not one of " + allowed);
}

using Setter = std::function<void(Config&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"tau_C", [](Config& c, const std::string& v, const std::string& k) { c.params.tau_C = parse_double(v, k); }},
      {"tau_S", [](Config& c, const std::string& v, const std::string& k) { c.params.tau_S = parse_double(v, k); }},
      {"tau_G", [](Config& c, const std::string& v, const std::string& k) { c.params.tau_G = parse_double(v, k); }},
      {"gamma_order_n",
       [](Config& c, const std::string& v, const std::string& k) {
         const auto n = parse_unsigned(v, k);
         if (n > 170) throw DomainError("config key 'gamma_order_n': order above 170 overflows n!");
         c.params.gamma_order_n = static_cast<unsigned>(n);
       }},
      {"w_C", [](Config& c, const std::string& v, const std::string& k) { c.params.w_C = parse_double(v, k); }},
      {"w_S", [](Config& c, const std::string& v, const std::string& k) { c.params.w_S = parse_double(v, k); }},
      {"sigma_c", [](Config& c, const std::string& v, const std::string& k) { c.params.sigma_c = parse_double(v, k); }},
      {"sigma_s", [](Config& c, const std::string& v, const std::string& k) { c.params.sigma_s = parse_double(v, k); }},
      {"dt", [](Config& c, const std::string& v, const std::string& k) { c.dt = parse_double(v, k); }},
      {"t_max", [](Config& c, const std::string& v, const std::string& k) { c.t_max = parse_double(v, k); }},
      {"m",
       [](Config& c, const std::string& v, const std::string& k) {
         c.m = parse_unsigned(v, k);
         if (c.m == 0) throw DomainError("config key 'm' must be at least 1");
       }},
      {"time_bins", [](Config& c, const std::string& v, const std::string&) { c.time_bins = parse_number_list(v); }},
      {"convergence_eps",
       [](Config& c, const std::string& v, const std::string& k) { c.convergence_eps = parse_double(v, k); }},
      {"solver",
       [](Config& c, const std::string& v, const std::string& k) {
         c.solver.mode = parse_choice<SolverMode>(
             v, k, {{"gradient-descent", SolverMode::GradientDescent}, {"fourier-dual", SolverMode::FourierDual}});
       }},
      {"mask_semantics",
       [](Config& c, const std::string& v, const std::string& k) {
         c.solver.mask_semantics = parse_choice<MaskSemantics>(
             v, k, {{"masked-objective", MaskSemantics::MaskedObjective}, {"zero-fill", MaskSemantics::ZeroFill}});
       }},
      {"step_size",
       [](Config& c, const std::string& v, const std::string& k) {
         if (v == "auto") {
           c.solver.step_size.reset();
         } else {
           c.solver.step_size = parse_double(v, k);
         }
       }},
      {"max_iters", [](Config& c, const std::string& v, const std::string& k) { c.solver.max_iters = parse_unsigned(v, k); }},
      {"grad_tol", [](Config& c, const std::string& v, const std::string& k) { c.solver.grad_tol = parse_double(v, k); }},
      {"init",
       [](Config& c, const std::string& v, const std::string& k) {
         c.solver.init =
             parse_choice<InitMode>(v, k, {{"zeros", InitMode::Zeros}, {"dc-estimate", InitMode::DcEstimate}});
       }},
      {"seed", [](Config& c, const std::string& v, const std::string& k) { c.seed = parse_unsigned(v, k); }},
      {"frame_trials",
       [](Config& c, const std::string& v, const std::string& k) {
         c.frame_trials = parse_unsigned(v, k);
         if (c.frame_trials == 0) throw DomainError("config key 'frame_trials' must be at least 1");
       }},
  };
  return table;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const std::string token = trim(item);
    if (token.empty()) throw DomainError("empty entry in number list '" + text + "'");
    values.push_back(parse_double(token, "list"));
  }
  if (values.empty() || (!text.empty() && text.back() == ',')) {
    throw DomainError("malformed number list '" + text + "'");
  }
  return values;
}

Config parse_config(const std::string& text) {
  Config config;
  std::set<std::string> seen;
  std::stringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) throw DomainError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) {
      throw DomainError("config line " + std::to_string(line_no) + ": key '" + key + "' given twice");
    }
    it->second(config, value, key);
  }
  config.params.validate();
  config.solver.validate();
  if (!(config.convergence_eps > 0.0)) throw DomainError("convergence_eps must be positive");
  config.time_grid();
  return config;
}

Config load_config(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return parse_config(std::string(bytes.begin(), bytes.end()));
  } catch (const DomainError& e) {
    throw DomainError(path.string() + ": " + e.what());
  }
}

std::vector<double> resolve_time_bins(const Config& config, const TemporalProfile& profile) {
  if (config.time_bins) return *config.time_bins;
  const FineTimeGrid grid = config.time_grid();
  const double horizon = convergence_time(profile, config.params, grid, config.convergence_eps);
  if (horizon <= 0.0) throw DomainError("convergence time is zero; bins on (0, 0] are empty");
  return uniform_time_bins(horizon, config.m);
}

SpatioTemporalFilter build_filter(const Config& config, const PixelGrid& grid, const std::vector<double>& time_bins) {
  const FineTimeGrid time_grid = config.time_grid();
  const TemporalProfile profile = temporal_profile(config.params, time_grid);
  const TemporalWeights weights = integrate_weights(profile.center, profile.surround, time_grid, time_bins);
  return build_phi(config.params, weights, grid);
}

SpatioTemporalFilter build_filter(const Config& config, const PixelGrid& grid) {
  const FineTimeGrid time_grid = config.time_grid();
  const TemporalProfile profile = temporal_profile(config.params, time_grid);
  const std::vector<double> bins = resolve_time_bins(config, profile);
  const TemporalWeights weights = integrate_weights(profile.center, profile.surround, time_grid, bins);
  return build_phi(config.params, weights, grid);
}

}  // namespace nonspam
