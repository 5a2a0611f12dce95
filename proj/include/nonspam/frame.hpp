#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nonspam/spatial.hpp"

namespace nonspam {

/// Still intensity image on the pixel torus (native file scale, usually 0..255).
struct Image {
  PixelGrid grid;
  RealArray pixels;

  Image() = default;
  explicit Image(const PixelGrid& g, double value = 0.0) : grid(g), pixels(g.rows, g.cols, value) {}
  Image(const PixelGrid& g, RealArray values);
};

/// Coefficients A(x_k, t_j), one rows x cols plane per time bin.
struct ActivationTensor {
  PixelGrid grid;
  std::vector<double> time_bins;
  std::vector<RealArray> coeffs;

  std::size_t bins() const noexcept { return coeffs.size(); }
};

struct FrameBounds {
  double alpha_paper = 0.0;
  double beta_paper = 0.0;
  double alpha_tight = 0.0;
  double beta_tight = 0.0;
};

struct FrameCheckReport {
  FrameBounds bounds;
  std::size_t trials = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

/// coeffs[j] = phi_j (circularly convolved with) image, computed in the DFT domain.
ActivationTensor analyze(const Image& image, const SpatioTemporalFilter& filter);

/// (min_xi S(xi) / n, n sum_j sum_x phi_j(x)^2). The second value equals the
/// triple sum over (j, k, i) of squared shifted kernels on the torus.
std::pair<double, double> frame_bounds_paper(const SpatioTemporalFilter& filter);

/// (min_xi S(xi), max_xi S(xi)): the extreme eigenvalues of the frame
/// operator's normal matrix under circular convolution.
std::pair<double, double> frame_bounds_tight(const SpatioTemporalFilter& filter);

/// Both pairs; throws FrameDegenerateError when the lower bound is not positive.
FrameBounds frame_bounds(const SpatioTemporalFilter& filter);

/// Sum of squared coefficients over all bins, in bin-major order.
double coefficient_energy(const ActivationTensor& acts);

/// Frame-operator energy ratio sum|A|^2 / ||f||^2.
double energy_ratio(const Image& image, const SpatioTemporalFilter& filter);

/// Image with pixels uniform in [0, 255] drawn from `rng`: each pixel
/// consumes one 64-bit output u and is (u >> 11) * 2^-53 * 255.
Image random_image(const PixelGrid& grid, std::mt19937_64& rng);

/// Checks the frame inequality on `trials` images from std::mt19937_64(seed),
/// drawn sequentially. Throws FrameViolationError naming the failing trial.
FrameCheckReport frame_check(const SpatioTemporalFilter& filter, std::size_t trials, std::uint64_t seed);

/// Dense (n m) x n analysis matrix; row j*n + k holds phi_j(x_k - x_i) for
/// i = 0..n-1 with row-major pixel indexing. Refuses n m > 65536.
Eigen::MatrixXd dense_frame_matrix(const SpatioTemporalFilter& filter);

/// Pixel values flattened row-major into a column vector, and back.
Eigen::VectorXd flatten(const RealArray& values);
RealArray unflatten(const Eigen::VectorXd& values, const PixelGrid& grid);

}  // namespace nonspam
