#include "nonspam/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "nonspam/csv.hpp"
#include "nonspam/error.hpp"
#include "nonspam/parallel.hpp"

namespace nonspam {

PixelGrid::PixelGrid(std::size_t r, std::size_t c) : rows(r), cols(c) {
  if (r == 0 || c == 0) throw DomainError("pixel grid needs at least one row and one column");
}

double eval_gaussian2d(double dx, double dy, double sigma) {
  if (!std::isfinite(dx) || !std::isfinite(dy) || !std::isfinite(sigma)) {
    throw DomainError("eval_gaussian2d: non-finite argument");
  }
  if (sigma <= 0.0) throw DomainError("eval_gaussian2d: sigma must be positive");
  const double var = sigma * sigma;
  return std::exp(-(dx * dx + dy * dy) / (2.0 * var)) / (2.0 * std::numbers::pi * var);
}

namespace {

double wrap(std::size_t index, std::size_t length) {
  return static_cast<double>(std::min(index, length - index));
}

}  // namespace

RealArray sample_kernel_grid(double sigma, const PixelGrid& grid) {
  RealArray kernel(grid.rows, grid.cols);
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      kernel(r, c) = eval_gaussian2d(wrap(r, grid.rows), wrap(c, grid.cols), sigma);
    }
  }
  return kernel;
}

SpatioTemporalFilter SpatioTemporalFilter::from_kernels(const PixelGrid& grid, std::vector<double> time_bins,
                                                        std::vector<RealArray> kernels) {
  if (kernels.empty()) throw DomainError("filter needs at least one time bin");
  if (time_bins.size() != kernels.size()) throw DimensionError("time bin count differs from kernel count");
  for (const auto& k : kernels) {
    if (k.rows() != grid.rows || k.cols() != grid.cols) throw DimensionError("kernel shape differs from grid");
  }

  SpatioTemporalFilter filter;
  filter.grid_ = grid;
  filter.time_bins_ = std::move(time_bins);
  filter.kernels_ = std::move(kernels);
  filter.spectra_.resize(filter.kernels_.size());
  parallel_for(filter.kernels_.size(), [&](std::size_t j) { filter.spectra_[j] = fft2(filter.kernels_[j]); });

  filter.aggregate_ = RealArray(grid.rows, grid.cols, 0.0);
  for (const auto& spectrum : filter.spectra_) {
    for (std::size_t i = 0; i < spectrum.size(); ++i) filter.aggregate_[i] += std::norm(spectrum[i]);
  }
  return filter;
}

SpatioTemporalFilter build_phi(const RetinaParams& params, const TemporalWeights& weights, const PixelGrid& grid) {
  params.validate();
  if (weights.rc.size() != weights.size() || weights.rs.size() != weights.size()) {
    throw DimensionError("temporal weights have inconsistent lengths");
  }
  const RealArray center = sample_kernel_grid(params.sigma_c, grid);
  const RealArray surround = sample_kernel_grid(params.sigma_s, grid);

  std::vector<RealArray> kernels;
  kernels.reserve(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double a = params.w_C * weights.rc[j];
    const double b = params.w_S * weights.rs[j];
    RealArray kernel(grid.rows, grid.cols);
    for (std::size_t i = 0; i < kernel.size(); ++i) kernel[i] = a * center[i] - b * surround[i];
    kernels.push_back(std::move(kernel));
  }
  return SpatioTemporalFilter::from_kernels(grid, weights.time_bins, std::move(kernels));
}

RealArray dog_limit(const RetinaParams& params, const PixelGrid& grid) {
  params.validate();
  const double limit = asymptotic_weight(params);
  const RealArray center = sample_kernel_grid(params.sigma_c, grid);
  const RealArray surround = sample_kernel_grid(params.sigma_s, grid);
  RealArray out(grid.rows, grid.cols);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = limit * (params.w_C * center[i] - params.w_S * surround[i]);
  }
  return out;
}

void write_spectrum_cut_csv(std::ostream& out, const SpatioTemporalFilter& filter) {
  out << "freq_index";
  for (std::size_t j = 0; j < filter.bins(); ++j) out << ",bin_" << (j + 1);
  out << '\n';
  for (std::size_t k = 0; k < filter.grid().cols; ++k) {
    out << k;
    for (const auto& spectrum : filter.spectra()) out << ',' << format_number(std::abs(spectrum(0, k)));
    out << '\n';
  }
}

}  // namespace nonspam
