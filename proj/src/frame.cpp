#include "nonspam/frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nonspam/csv.hpp"
#include "nonspam/error.hpp"
#include "nonspam/parallel.hpp"

namespace nonspam {

Image::Image(const PixelGrid& g, RealArray values) : grid(g), pixels(std::move(values)) {
  if (pixels.rows() != g.rows || pixels.cols() != g.cols) throw DimensionError("pixel array shape differs from grid");
}

ActivationTensor analyze(const Image& image, const SpatioTemporalFilter& filter) {
  if (!(image.grid == filter.grid())) throw DimensionError("image grid differs from filter grid");

  const ComplexArray image_spectrum = fft2(image.pixels);
  ActivationTensor acts;
  acts.grid = image.grid;
  acts.time_bins = filter.time_bins();
  acts.coeffs.resize(filter.bins());
  std::vector<double> residue(filter.bins(), 0.0);

  parallel_for(filter.bins(), [&](std::size_t j) {
    ComplexArray product = filter.spectra()[j];
    for (std::size_t i = 0; i < product.size(); ++i) product[i] *= image_spectrum[i];
    acts.coeffs[j] = ifft2_real(product, &residue[j]);
  });

  double peak = 0.0;
  double worst = 0.0;
  for (std::size_t j = 0; j < acts.bins(); ++j) {
    for (double v : acts.coeffs[j].values()) peak = std::max(peak, std::abs(v));
    worst = std::max(worst, residue[j]);
  }
  if (worst > 1e-9 * peak && worst > std::numeric_limits<double>::min()) {
    throw Error(ErrorKind::Numerical, "analysis produced an imaginary residue of " + format_number(worst));
  }
  return acts;
}

std::pair<double, double> frame_bounds_tight(const SpatioTemporalFilter& filter) {
  const auto values = filter.aggregate_spectrum().values();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

std::pair<double, double> frame_bounds_paper(const SpatioTemporalFilter& filter) {
  const double n = static_cast<double>(filter.grid().size());
  const double alpha = frame_bounds_tight(filter).first / n;
  double energy = 0.0;
  for (const auto& kernel : filter.kernels()) {
    for (double v : kernel.values()) energy += v * v;
  }
  return {alpha, n * energy};
}

FrameBounds frame_bounds(const SpatioTemporalFilter& filter) {
  FrameBounds bounds;
  std::tie(bounds.alpha_paper, bounds.beta_paper) = frame_bounds_paper(filter);
  std::tie(bounds.alpha_tight, bounds.beta_tight) = frame_bounds_tight(filter);
  if (!(bounds.alpha_tight > 0.0)) {
    throw FrameDegenerateError("aggregate spectrum vanishes (min S = " + format_number(bounds.alpha_tight) +
                               "): the kernel family is not a frame");
  }
  return bounds;
}

double coefficient_energy(const ActivationTensor& acts) {
  double energy = 0.0;
  for (const auto& plane : acts.coeffs) {
    for (double v : plane.values()) energy += v * v;
  }
  return energy;
}

double energy_ratio(const Image& image, const SpatioTemporalFilter& filter) {
  double norm2 = 0.0;
  for (double v : image.pixels.values()) norm2 += v * v;
  if (norm2 == 0.0) throw DomainError("energy ratio of a zero image is undefined");
  return coefficient_energy(analyze(image, filter)) / norm2;
}

Image random_image(const PixelGrid& grid, std::mt19937_64& rng) {
  Image image(grid);
  for (auto& v : image.pixels.values()) {
    v = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 255.0;
  }
  return image;
}

FrameCheckReport frame_check(const SpatioTemporalFilter& filter, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw DomainError("frame_check needs at least one trial");
  FrameCheckReport report;
  report.bounds = frame_bounds(filter);
  report.trials = trials;
  const FrameBounds& b = report.bounds;
  if (!(b.alpha_paper <= b.alpha_tight && b.alpha_tight <= b.beta_tight && b.beta_tight <= b.beta_paper)) {
    throw FrameViolationError("bound ordering alpha_paper <= alpha_tight <= beta_tight <= beta_paper fails", 0);
  }

  std::mt19937_64 rng(seed);
  std::vector<Image> images;
  images.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) images.push_back(random_image(filter.grid(), rng));

  std::vector<double> ratios(trials);
  parallel_for(trials, [&](std::size_t t) { ratios[t] = energy_ratio(images[t], filter); });

  const double slack = 1e-9 * b.beta_tight;
  report.min_ratio = ratios.front();
  report.max_ratio = ratios.front();
  for (std::size_t t = 0; t < trials; ++t) {
    if (ratios[t] < b.alpha_tight - slack || ratios[t] > b.beta_tight + slack) {
      throw FrameViolationError("energy ratio " + format_number(ratios[t]) + " escapes [" +
                                    format_number(b.alpha_tight) + ", " + format_number(b.beta_tight) + "]",
                                t);
    }
    report.min_ratio = std::min(report.min_ratio, ratios[t]);
    report.max_ratio = std::max(report.max_ratio, ratios[t]);
  }
  return report;
}

Eigen::MatrixXd dense_frame_matrix(const SpatioTemporalFilter& filter) {
  const PixelGrid& grid = filter.grid();
  const std::size_t n = grid.size();
  const std::size_t m = filter.bins();
  if (n * m > 65536) {
    throw ScaleGuardError("dense frame matrix refused: n*m = " + std::to_string(n * m) + " exceeds 65536");
  }

  Eigen::MatrixXd matrix(static_cast<Eigen::Index>(n * m), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < m; ++j) {
    const RealArray& kernel = filter.kernels()[j];
    for (std::size_t kr = 0; kr < grid.rows; ++kr) {
      for (std::size_t kc = 0; kc < grid.cols; ++kc) {
        const auto row = static_cast<Eigen::Index>(j * n + kr * grid.cols + kc);
        for (std::size_t ir = 0; ir < grid.rows; ++ir) {
          for (std::size_t ic = 0; ic < grid.cols; ++ic) {
            const std::size_t dr = (kr + grid.rows - ir) % grid.rows;
            const std::size_t dc = (kc + grid.cols - ic) % grid.cols;
            matrix(row, static_cast<Eigen::Index>(ir * grid.cols + ic)) = kernel(dr, dc);
          }
        }
      }
    }
  }
  return matrix;
}

Eigen::VectorXd flatten(const RealArray& values) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) out(static_cast<Eigen::Index>(i)) = values[i];
  return out;
}

RealArray unflatten(const Eigen::VectorXd& values, const PixelGrid& grid) {
  if (static_cast<std::size_t>(values.size()) != grid.size()) throw DimensionError("vector length differs from grid");
  RealArray out(grid.rows, grid.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values(static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace nonspam
