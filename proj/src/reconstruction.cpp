#include "nonspam/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "nonspam/csv.hpp"
#include "nonspam/error.hpp"
#include "nonspam/parallel.hpp"

namespace nonspam {

CoefficientMask CoefficientMask::full(const PixelGrid& grid, std::size_t bins) {
  CoefficientMask mask;
  mask.grid = grid;
  mask.percentage = 100.0;
  mask.keep.assign(bins, Array2D<unsigned char>(grid.rows, grid.cols, 1));
  return mask;
}

std::size_t CoefficientMask::selected(std::size_t bin) const {
  const auto values = keep.at(bin).values();
  return static_cast<std::size_t>(std::count(values.begin(), values.end(), 1));
}

void ReconstructionOptions::validate() const {
  if (step_size && !(std::isfinite(*step_size) && *step_size > 0.0)) {
    throw DomainError("step size must be positive");
  }
  if (max_iters < 1) throw DomainError("max_iters must be at least 1");
  if (!(std::isfinite(grad_tol) && grad_tol > 0.0)) throw DomainError("grad_tol must be positive");
}

namespace {

void require_consistent(const ActivationTensor& acts, const SpatioTemporalFilter& filter) {
  if (!(acts.grid == filter.grid())) throw DimensionError("activation grid differs from filter grid");
  if (acts.bins() != filter.bins()) throw DimensionError("activation bin count differs from filter");
  for (const auto& plane : acts.coeffs) {
    if (plane.rows() != acts.grid.rows || plane.cols() != acts.grid.cols) {
      throw DimensionError("activation plane shape differs from grid");
    }
  }
}

void require_consistent(const CoefficientMask& mask, const ActivationTensor& acts) {
  if (!(mask.grid == acts.grid) || mask.bins() != acts.bins()) {
    throw DimensionError("coefficient mask does not match the activation tensor");
  }
}

bool is_full(const CoefficientMask& mask) {
  for (const auto& plane : mask.keep) {
    for (unsigned char v : plane.values()) {
      if (v == 0) return false;
    }
  }
  return true;
}

ActivationTensor apply_mask(const ActivationTensor& acts, const CoefficientMask& mask) {
  ActivationTensor out = acts;
  for (std::size_t j = 0; j < out.bins(); ++j) {
    for (std::size_t i = 0; i < out.coeffs[j].size(); ++i) {
      if (mask.keep[j][i] == 0) out.coeffs[j][i] = 0.0;
    }
  }
  return out;
}

double max_abs(const RealArray& values) {
  double peak = 0.0;
  for (double v : values.values()) peak = std::max(peak, std::abs(v));
  return peak;
}

Image initial_guess(const ActivationTensor& acts, const CoefficientMask& mask, const SpatioTemporalFilter& filter,
                    InitMode init) {
  Image guess(acts.grid);
  if (init == InitMode::Zeros) return guess;

  // Mean intensity from the DC coefficient of the first bin as the decoder
  // sees it (unselected entries read as zero): DC(A_0) = n * mean(f) * DC_0.
  const double dc = filter.spectra()[0](0, 0).real();
  double sum = 0.0;
  for (std::size_t i = 0; i < acts.coeffs[0].size(); ++i) {
    if (mask.keep[0][i] != 0) sum += acts.coeffs[0][i];
  }
  if (std::abs(dc) < 1e-300) return guess;
  const double mean = sum / static_cast<double>(acts.coeffs[0].size()) / dc;
  for (auto& v : guess.pixels.values()) v = mean;
  return guess;
}

}  // namespace

Image dual_solve(const ActivationTensor& acts, const SpatioTemporalFilter& filter) {
  require_consistent(acts, filter);
  const auto [s_min, s_max] = frame_bounds_tight(filter);
  if (!(s_min >= 1e-12 * s_max) || s_max <= 0.0) {
    throw FrameDegenerateError("ill-conditioned frame: min S = " + format_number(s_min) +
                               ", max S = " + format_number(s_max));
  }

  const RealArray& aggregate = filter.aggregate_spectrum();
  ComplexArray numerator(acts.grid.rows, acts.grid.cols, Complex(0.0, 0.0));
  for (std::size_t j = 0; j < filter.bins(); ++j) {
    const ComplexArray coeff_spectrum = fft2(acts.coeffs[j]);
    const ComplexArray& spectrum = filter.spectra()[j];
    for (std::size_t i = 0; i < numerator.size(); ++i) numerator[i] += std::conj(spectrum[i]) * coeff_spectrum[i];
  }
  for (std::size_t i = 0; i < numerator.size(); ++i) numerator[i] /= aggregate[i];
  return Image(acts.grid, ifft2_real(numerator));
}

RealArray adjoint_bin(const RealArray& coeffs, const SpatioTemporalFilter& filter, std::size_t bin) {
  if (bin >= filter.bins()) throw RangeError("bin index out of range");
  if (coeffs.rows() != filter.grid().rows || coeffs.cols() != filter.grid().cols) {
    throw DimensionError("coefficient plane shape differs from filter grid");
  }
  ComplexArray spectrum = fft2(coeffs);
  const ComplexArray& kernel = filter.spectra()[bin];
  for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= std::conj(kernel[i]);
  return ifft2_real(spectrum);
}

namespace {

// Non-redundant halves of the kernel spectra plus scratch buffers, so each
// objective evaluation costs 2m + 2 real transforms and no allocation.
class HalfSpectrumWorkspace {
 public:
  explicit HalfSpectrumWorkspace(const SpatioTemporalFilter& filter) : grid_(filter.grid()) {
    const std::size_t half_cols = grid_.cols / 2 + 1;
    kernels_.reserve(filter.bins());
    for (const auto& spectrum : filter.spectra()) {
      ComplexArray half(grid_.rows, half_cols);
      for (std::size_t r = 0; r < grid_.rows; ++r)
        for (std::size_t c = 0; c < half_cols; ++c) half(r, c) = spectrum(r, c);
      kernels_.push_back(std::move(half));
    }
    image_spectrum_ = ComplexArray(grid_.rows, half_cols);
    gradient_spectrum_ = ComplexArray(grid_.rows, half_cols);
    product_ = ComplexArray(grid_.rows, half_cols);
    residual_spectrum_ = ComplexArray(grid_.rows, half_cols);
    residual_ = RealArray(grid_.rows, grid_.cols);
  }

  ObjectiveValue evaluate(const Image& f, const ActivationTensor& acts, const CoefficientMask& mask) {
    const double inv_n = 1.0 / static_cast<double>(grid_.size());
    rfft2_into(f.pixels, image_spectrum_);
    for (auto& v : gradient_spectrum_.values()) v = Complex(0.0, 0.0);
    double value = 0.0;
    for (std::size_t j = 0; j < kernels_.size(); ++j) {
      const ComplexArray& kernel = kernels_[j];
      for (std::size_t i = 0; i < product_.size(); ++i) product_[i] = kernel[i] * image_spectrum_[i];
      irfft2_unscaled(product_, residual_);
      const auto& keep = mask.keep[j];
      const auto& target = acts.coeffs[j];
      for (std::size_t i = 0; i < residual_.size(); ++i) {
        const double r = keep[i] != 0 ? residual_[i] * inv_n - target[i] : 0.0;
        residual_[i] = r;
        value += r * r;
      }
      rfft2_into(residual_, residual_spectrum_);
      for (std::size_t i = 0; i < gradient_spectrum_.size(); ++i) {
        gradient_spectrum_[i] += std::conj(kernel[i]) * residual_spectrum_[i];
      }
    }

    RealArray gradient(grid_.rows, grid_.cols);
    irfft2_unscaled(gradient_spectrum_, gradient);
    for (auto& v : gradient.values()) v *= 2.0 * inv_n;
    return {value, Image(grid_, std::move(gradient))};
  }

 private:
  PixelGrid grid_;
  std::vector<ComplexArray> kernels_;
  ComplexArray image_spectrum_;
  ComplexArray gradient_spectrum_;
  ComplexArray product_;
  ComplexArray residual_spectrum_;
  RealArray residual_;
};

}  // namespace

ObjectiveValue objective_and_gradient(const Image& f, const ActivationTensor& acts, const CoefficientMask& mask,
                                      const SpatioTemporalFilter& filter) {
  require_consistent(acts, filter);
  require_consistent(mask, acts);
  if (!(f.grid == acts.grid)) throw DimensionError("image grid differs from activation grid");
  return HalfSpectrumWorkspace(filter).evaluate(f, acts, mask);
}

SolveResult masked_least_squares(const ActivationTensor& acts, const CoefficientMask& mask,
                                 const SpatioTemporalFilter& filter, const ReconstructionOptions& opts) {
  opts.validate();
  require_consistent(acts, filter);
  require_consistent(mask, acts);

  ActivationTensor target = apply_mask(acts, mask);
  CoefficientMask active = mask;
  if (opts.mask_semantics == MaskSemantics::ZeroFill) active = CoefficientMask::full(acts.grid, acts.bins());

  SolveResult result;
  if (opts.mode == SolverMode::FourierDual) {
    if (!is_full(active)) {
      throw DomainError("the Fourier dual solver needs a full mask; use zero-fill semantics or gradient descent");
    }
    result.image = dual_solve(target, filter);
    const ObjectiveValue objective = objective_and_gradient(result.image, target, active, filter);
    result.objective_trace.push_back(objective.value);
    result.gradient_trace.push_back(max_abs(objective.gradient.pixels));
    result.converged = true;
    return result;
  }

  const double tolerance = opts.grad_tol * (1.0 + std::sqrt(coefficient_energy(target)));
  const double step = opts.step_size.value_or(1.0 / (2.0 * frame_bounds_tight(filter).second));

  HalfSpectrumWorkspace workspace(filter);
  Image current = initial_guess(target, active, filter, opts.init);
  for (std::size_t iter = 0;; ++iter) {
    ObjectiveValue objective = workspace.evaluate(current, target, active);
    const double grad_norm = max_abs(objective.gradient.pixels);
    result.objective_trace.push_back(objective.value);
    result.gradient_trace.push_back(grad_norm);
    if (grad_norm <= tolerance) {
      result.converged = true;
      result.iterations = iter;
      break;
    }
    if (iter == opts.max_iters) {
      result.iterations = iter;
      break;
    }
    auto x = current.pixels.values();
    const auto g = objective.gradient.pixels.values();
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= step * g[i];
  }
  result.image = std::move(current);
  return result;
}

std::size_t roc_count(double percentage, std::size_t n) {
  if (!(percentage > 0.0 && percentage <= 100.0)) {
    throw DomainError("percentage must lie in (0, 100], got " + format_number(percentage));
  }
  const double target = std::round(percentage / 100.0 * static_cast<double>(n));
  return std::clamp<std::size_t>(static_cast<std::size_t>(target), 1, n);
}

CoefficientMask roc_select(const ActivationTensor& acts, double percentage) {
  const std::size_t n = acts.grid.size();
  const std::size_t count = roc_count(percentage, n);

  CoefficientMask mask;
  mask.grid = acts.grid;
  mask.percentage = percentage;
  mask.keep.assign(acts.bins(), Array2D<unsigned char>(acts.grid.rows, acts.grid.cols, 0));

  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < acts.bins(); ++j) {
    const RealArray& plane = acts.coeffs[j];
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double ma = std::abs(plane[a]);
                        const double mb = std::abs(plane[b]);
                        return ma != mb ? ma > mb : a < b;
                      });
    for (std::size_t r = 0; r < count; ++r) mask.keep[j][order[r]] = 1;
  }
  return mask;
}

double mse(const Image& f, const Image& fhat) {
  if (!(f.grid == fhat.grid)) throw DimensionError("mse: images differ in shape");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.pixels.size(); ++i) {
    const double d = f.pixels[i] - fhat.pixels[i];
    sum += d * d;
  }
  return sum / static_cast<double>(f.pixels.size());
}

ProgressiveCurve progressive_reconstruct(const Image& image, const SpatioTemporalFilter& filter,
                                         const std::vector<double>& percentages, const ReconstructionOptions& opts,
                                         bool keep_images) {
  opts.validate();
  if (percentages.empty()) throw DomainError("at least one percentage is required");
  for (std::size_t i = 0; i < percentages.size(); ++i) {
    const double p = percentages[i];
    if (!(p > 0.0 && p <= 100.0)) throw DomainError("percentage must lie in (0, 100], got " + format_number(p));
    if (i > 0 && !(p > percentages[i - 1])) throw DomainError("percentages must be strictly ascending");
  }

  const ActivationTensor acts = analyze(image, filter);
  ProgressiveCurve curve;
  curve.points.resize(percentages.size());
  if (keep_images) curve.images.resize(percentages.size());

  parallel_for(percentages.size(), [&](std::size_t i) {
    CurvePoint& point = curve.points[i];
    point.percentage = percentages[i];
    try {
      const CoefficientMask mask = roc_select(acts, percentages[i]);
      SolveResult solved = masked_least_squares(acts, mask, filter, opts);
      point.mse = mse(image, solved.image);
      point.iterations = solved.iterations;
      point.converged = solved.converged;
      if (keep_images) curve.images[i] = std::move(solved.image);
    } catch (const Error& e) {
      point.failed = true;
      point.error = e.what();
    }
  });
  return curve;
}

void write_curve_csv(std::ostream& out, const ProgressiveCurve& curve) {
  out << "percentage,mse,iterations,converged\n";
  for (const auto& point : curve.points) {
    out << format_number(point.percentage) << ',' << (point.failed ? std::string("nan") : format_number(point.mse))
        << ',' << point.iterations << ',' << (point.converged ? 1 : 0) << '\n';
  }
}

}  // namespace nonspam
