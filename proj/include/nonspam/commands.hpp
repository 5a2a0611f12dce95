#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "nonspam/config.hpp"
#include "nonspam/error.hpp"

namespace nonspam {

/// Process exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitNumerical = 3,
};

int exit_code_for(const Error& error);

/// Writes temporal_kernels.csv and spectrum_cut.csv (cut computed on a
/// grid_size x grid_size torus) into out_dir.
void cmd_kernels(const Config& config, const std::filesystem::path& out_dir, std::size_t grid_size, std::ostream& log);

/// PGM in, NSPM out. With `render_dir`, also writes bin_<j>.pgm (per-bin
/// min-max normalized to 0..255) and render_bounds.csv holding the bounds.
void cmd_decompose(const std::filesystem::path& image_path, const Config& config,
                   const std::filesystem::path& coeff_path, const std::optional<std::filesystem::path>& render_dir,
                   std::ostream& log);

struct ReconstructOutcome {
  bool converged = false;
  std::size_t iterations = 0;
  std::optional<double> mse;
  std::optional<double> relative_mse;  // mse / mean(f^2)
};

/// NSPM in, PGM out (clamped and rounded at write time only). The text
/// report goes to `report` and, when given, to `report_path`.
ReconstructOutcome cmd_reconstruct(const std::filesystem::path& coeff_path, const Config& config, double percentage,
                                   const std::filesystem::path& out_image,
                                   const std::optional<std::filesystem::path>& original,
                                   const std::optional<std::filesystem::path>& report_path, std::ostream& report);

/// Decompose plus progressive reconstruction, written as a curve CSV.
ProgressiveCurve cmd_curve(const std::filesystem::path& image_path, const Config& config,
                           const std::vector<double>& percentages, const std::filesystem::path& out_csv,
                           std::ostream& log);

/// Prints the four frame bounds and the frame_check summary; with `oracle`
/// also the dense comparison. Returns kExitNumerical when a check fails.
int cmd_bounds(const Config& config, std::size_t grid_size, bool oracle, std::ostream& out);

/// Full CLI entry point: parses argv, runs the command, maps errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nonspam
