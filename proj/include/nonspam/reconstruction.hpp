#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nonspam/frame.hpp"

namespace nonspam {

/// Per-bin selection of retained coefficients.
struct CoefficientMask {
  PixelGrid grid;
  double percentage = 100.0;
  std::vector<Array2D<unsigned char>> keep;

  /// Every coefficient of every bin retained.
  static CoefficientMask full(const PixelGrid& grid, std::size_t bins);
  std::size_t bins() const noexcept { return keep.size(); }
  std::size_t selected(std::size_t bin) const;
};

enum class SolverMode { FourierDual, GradientDescent };

/// How coefficients outside the mask enter the least-squares objective:
/// MaskedObjective drops their residual terms, ZeroFill treats them as zeros.
enum class MaskSemantics { MaskedObjective, ZeroFill };

enum class InitMode { Zeros, DcEstimate };

struct ReconstructionOptions {
  SolverMode mode = SolverMode::GradientDescent;
  MaskSemantics mask_semantics = MaskSemantics::MaskedObjective;
  std::optional<double> step_size;  // empty: 1 / (2 beta_tight)
  std::size_t max_iters = 100000;
  double grad_tol = 1e-10;
  InitMode init = InitMode::Zeros;

  void validate() const;
};

struct ObjectiveValue {
  double value = 0.0;
  Image gradient;
};

struct SolveResult {
  Image image;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // objective at every visited iterate
  std::vector<double> gradient_trace;   // gradient infinity-norm at every visited iterate
};

struct CurvePoint {
  double percentage = 0.0;
  double mse = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool failed = false;
  std::string error;
};

struct ProgressiveCurve {
  std::vector<CurvePoint> points;
  std::vector<Image> images;  // filled only when requested, aligned with points
};

/// Exact normal-equations solution (Phi^T Phi)^-1 Phi^T A, evaluated
/// frequency by frequency: sum_j conj(phi~_j) A~_j / S. Throws
/// FrameDegenerateError when min S < 1e-12 max S.
Image dual_solve(const ActivationTensor& acts, const SpatioTemporalFilter& filter);

/// Adjoint of analyze for one bin: correlation with phi_j (convolution with
/// its spatial reflection).
RealArray adjoint_bin(const RealArray& coeffs, const SpatioTemporalFilter& filter, std::size_t bin);

/// value = sum_j ||mask_j . (phi_j * f - A_j)||^2 and its gradient
/// 2 sum_j phi_j^flip * (mask_j . residual_j).
ObjectiveValue objective_and_gradient(const Image& f, const ActivationTensor& acts, const CoefficientMask& mask,
                                      const SpatioTemporalFilter& filter);

/// Gradient descent on the masked objective. Stops when the gradient
/// infinity-norm is at most grad_tol (1 + ||mask . A||) or after max_iters.
/// ZeroFill semantics zero the unselected coefficients and use the full mask.
/// FourierDual mode solves the full-mask problem exactly (ZeroFill or a full
/// mask only).
SolveResult masked_least_squares(const ActivationTensor& acts, const CoefficientMask& mask,
                                 const SpatioTemporalFilter& filter, const ReconstructionOptions& opts);

/// Rank-order selection: per bin, keep the max(1, round(p/100 n)) largest
/// |A| (ties to the smaller row-major index).
CoefficientMask roc_select(const ActivationTensor& acts, double percentage);

/// Number of coefficients kept per bin at `percentage` of n, rounding half away from zero.
std::size_t roc_count(double percentage, std::size_t n);

double mse(const Image& f, const Image& fhat);

/// Analyze once, then reconstruct from ROC subsets at each percentage.
/// Percentages are processed independently; a solver failure marks its point.
ProgressiveCurve progressive_reconstruct(const Image& image, const SpatioTemporalFilter& filter,
                                         const std::vector<double>& percentages, const ReconstructionOptions& opts,
                                         bool keep_images = false);

/// CSV with columns percentage,mse,iterations,converged.
void write_curve_csv(std::ostream& out, const ProgressiveCurve& curve);

}  // namespace nonspam
