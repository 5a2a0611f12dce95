#include "nonspam/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "nonspam/coeff_file.hpp"
#include "nonspam/csv.hpp"
#include "nonspam/oracle.hpp"
#include "nonspam/pgm.hpp"

namespace nonspam {

namespace fs = std::filesystem;

int exit_code_for(const Error& error) {
  switch (error.kind()) {
    case ErrorKind::Validation:
      return kExitUsage;
    case ErrorKind::Io:
      return kExitIo;
    case ErrorKind::Numerical:
      return kExitNumerical;
  }
  return kExitNumerical;
}

namespace {

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void report_warnings(const Config& config, std::ostream& log) {
  for (const auto& w : config.params.validate()) log << "warning: " << w << '\n';
}

Image render_bin(const RealArray& plane, double lo, double hi) {
  Image out(PixelGrid(plane.rows(), plane.cols()));
  const double span = hi - lo;
  for (std::size_t i = 0; i < plane.size(); ++i) out.pixels[i] = span > 0.0 ? (plane[i] - lo) / span * 255.0 : 0.0;
  return out;
}

double mean_square(const Image& image) {
  double sum = 0.0;
  for (double v : image.pixels.values()) sum += v * v;
  return sum / static_cast<double>(image.pixels.size());
}

}  // namespace

void cmd_kernels(const Config& config, const fs::path& out_dir, std::size_t grid_size, std::ostream& log) {
  report_warnings(config, log);
  if (grid_size == 0) throw DomainError("grid size must be positive");
  const FineTimeGrid time_grid = config.time_grid();
  const TemporalProfile profile = temporal_profile(config.params, time_grid);
  const std::vector<double> bins = resolve_time_bins(config, profile);
  const TemporalWeights weights = integrate_weights(profile.center, profile.surround, time_grid, bins);
  const SpatioTemporalFilter filter = build_phi(config.params, weights, PixelGrid(grid_size, grid_size));

  ensure_directory(out_dir);
  std::ostringstream temporal;
  write_temporal_csv(temporal, profile, time_grid);
  write_text_file(out_dir / "temporal_kernels.csv", temporal.str());
  std::ostringstream cut;
  write_spectrum_cut_csv(cut, filter);
  write_text_file(out_dir / "spectrum_cut.csv", cut.str());
  log << "wrote " << (out_dir / "temporal_kernels.csv").string() << " and " << (out_dir / "spectrum_cut.csv").string()
      << '\n';
}

void cmd_decompose(const fs::path& image_path, const Config& config, const fs::path& coeff_path,
                   const std::optional<fs::path>& render_dir, std::ostream& log) {
  report_warnings(config, log);
  const PgmImage input = read_pgm(image_path);
  const SpatioTemporalFilter filter = build_filter(config, input.image.grid);
  const ActivationTensor acts = analyze(input.image, filter);
  write_nspm(coeff_path, acts);
  log << "wrote " << acts.bins() << " bins of " << acts.grid.rows << "x" << acts.grid.cols << " coefficients to "
      << coeff_path.string() << '\n';

  if (render_dir) {
    ensure_directory(*render_dir);
    std::ostringstream bounds;
    bounds << "bin,time_s,min,max\n";
    for (std::size_t j = 0; j < acts.bins(); ++j) {
      const auto values = acts.coeffs[j].values();
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      write_pgm(*render_dir / ("bin_" + std::to_string(j + 1) + ".pgm"), render_bin(acts.coeffs[j], *lo, *hi));
      bounds << (j + 1) << ',' << format_number(acts.time_bins[j]) << ',' << format_number(*lo) << ','
             << format_number(*hi) << '\n';
    }
    write_text_file(*render_dir / "render_bounds.csv", bounds.str());
  }
}

ReconstructOutcome cmd_reconstruct(const fs::path& coeff_path, const Config& config, double percentage,
                                   const fs::path& out_image, const std::optional<fs::path>& original,
                                   const std::optional<fs::path>& report_path, std::ostream& report) {
  report_warnings(config, report);
  roc_count(percentage, 1);
  const ActivationTensor acts = read_nspm(coeff_path);
  const SpatioTemporalFilter filter = build_filter(config, acts.grid, acts.time_bins);

  std::optional<PgmImage> reference;
  if (original) {
    reference = read_pgm(*original);
    if (!(reference->image.grid == acts.grid)) throw DimensionError("original image shape differs from coefficients");
  }

  const CoefficientMask mask = roc_select(acts, percentage);
  const SolveResult solved = masked_least_squares(acts, mask, filter, config.solver);

  ReconstructOutcome outcome;
  outcome.converged = solved.converged;
  outcome.iterations = solved.iterations;
  if (reference) {
    outcome.mse = mse(reference->image, solved.image);
    const double energy = mean_square(reference->image);
    if (energy > 0.0) outcome.relative_mse = *outcome.mse / energy;
  }
  write_pgm(out_image, solved.image, reference ? reference->maxval : 255);

  std::ostringstream text;
  text << "percentage = " << format_number(percentage) << '\n';
  text << "bins = " << acts.bins() << '\n';
  text << "kept_per_bin = " << mask.selected(0) << '\n';
  text << "iterations = " << solved.iterations << '\n';
  text << "converged = " << (solved.converged ? 1 : 0) << '\n';
  text << "objective = " << format_number(solved.objective_trace.back()) << '\n';
  if (outcome.mse) text << "mse = " << format_number(*outcome.mse) << '\n';
  if (outcome.relative_mse) text << "relative_mse = " << format_number(*outcome.relative_mse) << '\n';
  report << text.str();
  if (report_path) write_text_file(*report_path, text.str());
  return outcome;
}

ProgressiveCurve cmd_curve(const fs::path& image_path, const Config& config, const std::vector<double>& percentages,
                           const fs::path& out_csv, std::ostream& log) {
  report_warnings(config, log);
  const PgmImage input = read_pgm(image_path);
  const SpatioTemporalFilter filter = build_filter(config, input.image.grid);
  ProgressiveCurve curve = progressive_reconstruct(input.image, filter, percentages, config.solver);
  std::ostringstream csv;
  write_curve_csv(csv, curve);
  write_text_file(out_csv, csv.str());
  for (const auto& point : curve.points) {
    if (point.failed) log << "warning: " << format_number(point.percentage) << "% failed: " << point.error << '\n';
  }
  log << "wrote " << curve.points.size() << " curve points to " << out_csv.string() << '\n';
  return curve;
}

int cmd_bounds(const Config& config, std::size_t grid_size, bool oracle, std::ostream& out) {
  report_warnings(config, out);
  if (grid_size == 0) throw DomainError("grid size must be positive");
  const SpatioTemporalFilter filter = build_filter(config, PixelGrid(grid_size, grid_size));
  const auto [alpha_paper, beta_paper] = frame_bounds_paper(filter);
  const auto [alpha_tight, beta_tight] = frame_bounds_tight(filter);
  out << "grid = " << grid_size << "x" << grid_size << '\n';
  out << "bins = " << filter.bins() << '\n';
  out << "alpha_paper = " << format_number(alpha_paper) << '\n';
  out << "beta_paper = " << format_number(beta_paper) << '\n';
  out << "alpha_tight = " << format_number(alpha_tight) << '\n';
  out << "beta_tight = " << format_number(beta_tight) << '\n';
  const bool chain = alpha_paper <= alpha_tight && alpha_tight <= beta_tight && beta_tight <= beta_paper;
  out << "chain alpha_paper <= alpha_tight <= beta_tight <= beta_paper: " << (chain ? "holds" : "VIOLATED") << '\n';
  if (!chain) return kExitNumerical;

  const FrameCheckReport report = frame_check(filter, config.frame_trials, config.seed);
  out << "frame_check trials = " << report.trials << " seed = " << config.seed << '\n';
  out << "frame_check min_ratio = " << format_number(report.min_ratio) << '\n';
  out << "frame_check max_ratio = " << format_number(report.max_ratio) << '\n';

  int status = kExitOk;
  if (oracle) {
    const DenseOracleReport dense = dense_oracle_check(filter, config.seed);
    constexpr double kTolerance = 1e-8;
    out << "oracle analysis_max_abs_error = " << format_number(dense.analysis_max_abs_error) << '\n';
    out << "oracle eigenvalue_max_rel_error = " << format_number(dense.eigenvalue_max_rel_error) << '\n';
    out << "oracle alpha_rel_error = " << format_number(dense.alpha_rel_error) << '\n';
    out << "oracle beta_rel_error = " << format_number(dense.beta_rel_error) << '\n';
    out << "oracle pinv_rel_error = " << format_number(dense.pinv_rel_error) << '\n';
    const bool ok = dense.analysis_max_abs_error <= 1e-9 && dense.eigenvalue_max_rel_error <= kTolerance &&
                    dense.alpha_rel_error <= kTolerance && dense.beta_rel_error <= kTolerance &&
                    dense.pinv_rel_error <= kTolerance;
    out << "oracle: " << (ok ? "agrees" : "DISAGREES") << '\n';
    if (!ok) status = kExitNumerical;
  }
  return status;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analysis/synthesis codec over a time-varying difference-of-Gaussians frame", "nonspam"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string percent_text;
  bool oracle = false;
  bool strict = false;
  std::string out_path;
  std::string input_path;
  std::string original_path;
  std::string report_path;
  std::string render_dir;
  std::size_t grid_size = 64;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key = value configuration file");
    sub->add_option("--seed", seed, "seed overriding the configuration");
  };

  auto* kernels = app.add_subcommand("kernels", "temporal kernels and spectrum-cut CSVs");
  add_common(kernels);
  kernels->add_option("--out", out_path, "output directory")->required();
  kernels->add_option("--grid", grid_size, "side of the square torus for the spectrum cut");

  auto* decompose = app.add_subcommand("decompose", "PGM image to NSPM coefficients");
  add_common(decompose);
  decompose->add_option("image", input_path, "input PGM")->required();
  decompose->add_option("--out", out_path, "output NSPM file")->required();
  decompose->add_option("--renders", render_dir, "directory for per-bin PGM renders");

  auto* reconstruct = app.add_subcommand("reconstruct", "NSPM coefficients to PGM image");
  add_common(reconstruct);
  reconstruct->add_option("coefficients", input_path, "input NSPM file")->required();
  reconstruct->add_option("--percent", percent_text, "percentage of coefficients kept per bin")->required();
  reconstruct->add_option("--out", out_path, "output PGM")->required();
  reconstruct->add_option("--original", original_path, "reference PGM for the MSE report");
  reconstruct->add_option("--report", report_path, "also write the text report here");
  reconstruct->add_flag("--strict", strict, "treat a non-converged solve as a numerical failure");

  auto* curve = app.add_subcommand("curve", "progressive reconstruction quality curve");
  add_common(curve);
  curve->add_option("image", input_path, "input PGM")->required();
  curve->add_option("--percent", percent_text, "ascending percentages, comma separated")->required();
  curve->add_option("--out", out_path, "output CSV")->required();

  auto* bounds = app.add_subcommand("bounds", "frame bounds and frame-inequality check");
  add_common(bounds);
  bounds->add_option("--grid", grid_size, "side of the square torus");
  bounds->add_flag("--oracle", oracle, "cross-check against the dense frame matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Config config = config_path.empty() ? Config{} : load_config(config_path);
    if (seed) config.seed = *seed;

    if (kernels->parsed()) {
      cmd_kernels(config, out_path, grid_size, out);
    } else if (decompose->parsed()) {
      cmd_decompose(input_path, config, out_path,
                    render_dir.empty() ? std::nullopt : std::optional<fs::path>(render_dir), out);
    } else if (reconstruct->parsed()) {
      const std::vector<double> percents = parse_number_list(percent_text);
      if (percents.size() != 1) throw DomainError("reconstruct takes exactly one percentage");
      const ReconstructOutcome outcome = cmd_reconstruct(
          input_path, config, percents.front(), out_path,
          original_path.empty() ? std::nullopt : std::optional<fs::path>(original_path),
          report_path.empty() ? std::nullopt : std::optional<fs::path>(report_path), out);
      if (!outcome.converged) {
        err << "warning: solver stopped after " << outcome.iterations << " iterations without converging\n";
        if (strict) return kExitNumerical;
      }
    } else if (curve->parsed()) {
      cmd_curve(input_path, config, parse_number_list(percent_text), out_path, out);
    } else if (bounds->parsed()) {
      return cmd_bounds(config, grid_size, oracle, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace nonspam
