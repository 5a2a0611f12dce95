#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "nonspam/fft.hpp"
#include "nonspam/temporal.hpp"

namespace nonspam {

/// Pixel torus of rows x cols samples. Offsets wrap: along an axis of length
/// L the effective distance of offset d is min(|d|, L - |d|).
struct PixelGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;

  PixelGrid() = default;
  PixelGrid(std::size_t r, std::size_t c);

  std::size_t size() const noexcept { return rows * cols; }
  friend bool operator==(const PixelGrid&, const PixelGrid&) = default;
};

/// Unit-mass continuous Gaussian (1 / (2 pi sigma^2)) exp(-(dx^2+dy^2)/(2 sigma^2)),
/// sampled as is with no discrete renormalization.
double eval_gaussian2d(double dx, double dy, double sigma);

/// Gaussian sampled on the torus with its peak at index (0, 0).
RealArray sample_kernel_grid(double sigma, const PixelGrid& grid);

/// Per-bin spatial kernels phi(., t_j), their spectra, and the aggregate
/// spectrum S(xi) = sum_j |phi~_j(xi)|^2 (summed in ascending j).
class SpatioTemporalFilter {
 public:
  /// Builds spectra and the aggregate spectrum for arbitrary kernels.
  static SpatioTemporalFilter from_kernels(const PixelGrid& grid, std::vector<double> time_bins,
                                           std::vector<RealArray> kernels);

  const PixelGrid& grid() const noexcept { return grid_; }
  std::size_t bins() const noexcept { return kernels_.size(); }
  const std::vector<double>& time_bins() const noexcept { return time_bins_; }
  const std::vector<RealArray>& kernels() const noexcept { return kernels_; }
  const std::vector<ComplexArray>& spectra() const noexcept { return spectra_; }
  const RealArray& aggregate_spectrum() const noexcept { return aggregate_; }

 private:
  PixelGrid grid_;
  std::vector<double> time_bins_;
  std::vector<RealArray> kernels_;
  std::vector<ComplexArray> spectra_;
  RealArray aggregate_;
};

/// kernels[j] = w_C rc[j] G_sigma_c - w_S rs[j] G_sigma_s on the torus.
SpatioTemporalFilter build_phi(const RetinaParams& params, const TemporalWeights& weights, const PixelGrid& grid);

/// Asymptotic DoG n! (1 - w_C) (w_C G_sigma_c - w_S G_sigma_s).
RealArray dog_limit(const RetinaParams& params, const PixelGrid& grid);

/// Transversal cut |phi~_j(0, k)|, k = 0..cols-1, with columns freq_index,bin_1..bin_m.
void write_spectrum_cut_csv(std::ostream& out, const SpatioTemporalFilter& filter);

}  // namespace nonspam
