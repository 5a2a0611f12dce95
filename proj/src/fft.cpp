#include "nonspam/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "nonspam/error.hpp"

namespace nonspam {
namespace {

enum class Kind { Forward, Backward, RealForward, RealBackward };

// The FFTW planner is not thread-safe; execution of an existing plan on
// new arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t rows, std::size_t cols, Kind kind) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(rows, cols, kind);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const std::size_t n = rows * cols;
    const int r = static_cast<int>(rows);
    const int c = static_cast<int>(cols);
    // Every Array2D is 64-byte aligned, so aligned (SIMD) plans are safe.
    constexpr unsigned flags = FFTW_ESTIMATE;
    auto* real = fftw_alloc_real(n);
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan plan = nullptr;
    switch (kind) {
      case Kind::Forward:
        plan = fftw_plan_dft_2d(r, c, in, out, FFTW_FORWARD, flags);
        break;
      case Kind::Backward:
        plan = fftw_plan_dft_2d(r, c, in, out, FFTW_BACKWARD, flags);
        break;
      case Kind::RealForward:
        plan = fftw_plan_dft_r2c_2d(r, c, real, out, flags);
        break;
      case Kind::RealBackward:
        plan = fftw_plan_dft_c2r_2d(r, c, in, real, flags);
        break;
    }
    fftw_free(real);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw Error(ErrorKind::Numerical, "FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, Kind>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

ComplexArray transform(const ComplexArray& input, Kind kind) {
  if (input.size() == 0) throw DimensionError("DFT of an empty array");
  ComplexArray output(input.rows(), input.cols());
  fftw_plan plan = cache().get(input.rows(), input.cols(), kind);
  // fftw_execute_dft never writes to its input for out-of-place plans.
  auto* in = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(input.data()));
  auto* out = reinterpret_cast<fftw_complex*>(output.data());
  fftw_execute_dft(plan, in, out);
  return output;
}

}  // namespace

ComplexArray fft2(const ComplexArray& input) { return transform(input, Kind::Forward); }

ComplexArray fft2(const RealArray& input) {
  ComplexArray promoted(input.rows(), input.cols());
  for (std::size_t i = 0; i < input.size(); ++i) promoted[i] = Complex(input[i], 0.0);
  return transform(promoted, Kind::Forward);
}

ComplexArray ifft2(const ComplexArray& input) {
  ComplexArray output = transform(input, Kind::Backward);
  const double scale = 1.0 / static_cast<double>(output.size());
  for (auto& v : output.values()) v *= scale;
  return output;
}

RealArray ifft2_real(const ComplexArray& input, double* max_imag) {
  const ComplexArray full = ifft2(input);
  RealArray output(full.rows(), full.cols());
  double residue = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    output[i] = full[i].real();
    residue = std::max(residue, std::abs(full[i].imag()));
  }
  if (max_imag != nullptr) *max_imag = residue;
  return output;
}

void rfft2_into(const RealArray& input, ComplexArray& out) {
  if (input.size() == 0) throw DimensionError("DFT of an empty array");
  if (out.rows() != input.rows() || out.cols() != input.cols() / 2 + 1) {
    out = ComplexArray(input.rows(), input.cols() / 2 + 1);
  }
  fftw_plan plan = cache().get(input.rows(), input.cols(), Kind::RealForward);
  // r2c plans leave their input untouched.
  auto* in = const_cast<double*>(input.data());
  fftw_execute_dft_r2c(plan, in, reinterpret_cast<fftw_complex*>(out.data()));
}

void irfft2_unscaled(ComplexArray& half, RealArray& out) {
  if (half.size() == 0 || out.size() == 0) throw DimensionError("DFT of an empty array");
  if (half.rows() != out.rows() || half.cols() != out.cols() / 2 + 1) {
    throw DimensionError("half spectrum shape does not match the output shape");
  }
  fftw_plan plan = cache().get(out.rows(), out.cols(), Kind::RealBackward);
  fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(half.data()), out.data());
}

ComplexArray rfft2(const RealArray& input) {
  ComplexArray output;
  rfft2_into(input, output);
  return output;
}

RealArray irfft2(const ComplexArray& half, std::size_t cols) {
  if (half.size() == 0 || cols == 0) throw DimensionError("DFT of an empty array");
  ComplexArray scratch = half;
  RealArray output(half.rows(), cols);
  irfft2_unscaled(scratch, output);
  const double scale = 1.0 / static_cast<double>(output.size());
  for (auto& v : output.values()) v *= scale;
  return output;
}

}  // namespace nonspam
