#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nonspam/reconstruction.hpp"
#include "nonspam/temporal.hpp"

namespace nonspam {

/// Everything a CLI run depends on. Parsed from flat `key = value` text;
/// `#` starts a comment, unknown or repeated keys are rejected, and missing
/// keys keep the defaults below.
///
///   tau_C tau_S tau_G gamma_order_n w_C w_S sigma_c sigma_s   filter constants
///   dt t_max                                                   fine time grid
///   m                 number of coefficient bins on (0, convergence time]
///   time_bins         explicit comma-separated bin times; overrides m
///   convergence_eps   relative tolerance defining the convergence time
///   solver            gradient-descent | fourier-dual
///   mask_semantics    masked-objective | zero-fill
///   step_size         auto | positive number
///   max_iters grad_tol
///   init              zeros | dc-estimate
///   seed frame_trials used by the bounds check
struct Config {
  RetinaParams params;
  double dt = 5e-5;
  double t_max = 0.5;
  std::size_t m = 5;
  std::optional<std::vector<double>> time_bins;
  double convergence_eps = 1e-3;
  ReconstructionOptions solver;
  std::uint64_t seed = 0;
  std::size_t frame_trials = 100;

  FineTimeGrid time_grid() const { return FineTimeGrid(dt, t_max); }
};

Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);

/// Comma-separated list of finite numbers; throws DomainError on any defect.
std::vector<double> parse_number_list(const std::string& text);

/// Configured bins: the explicit list, or m uniform bins up to the convergence time.
std::vector<double> resolve_time_bins(const Config& config, const TemporalProfile& profile);

/// Filter on `grid` for the configured bins.
SpatioTemporalFilter build_filter(const Config& config, const PixelGrid& grid);

/// Filter on `grid` for explicit bin times (e.g. the stamps stored in a coefficient file).
SpatioTemporalFilter build_filter(const Config& config, const PixelGrid& grid, const std::vector<double>& time_bins);

}  // namespace nonspam
