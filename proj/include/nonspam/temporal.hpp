#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nonspam {

/// Scalar constants of the center/surround filter. Times in seconds, widths
/// in pixels. Defaults are the retina-tuned parameter set.
struct RetinaParams {
  double tau_C = 0.020;
  double tau_S = 0.004;
  double tau_G = 0.005;
  unsigned gamma_order_n = 0;
  double w_C = 0.75;
  double w_S = 1.0;
  double sigma_c = 0.5;
  double sigma_s = 1.5;

  /// Throws DomainError for non-positive or non-finite constants. Returns
  /// warning-level diagnostics (w_C == 1 gives a zero asymptotic filter).
  std::vector<std::string> validate() const;
};

/// Uniform fine grid t_k = k*dt, k = 0..samples()-1, used for all quadratures.
class FineTimeGrid {
 public:
  FineTimeGrid(double dt = 5e-5, double t_max = 0.5);

  double dt() const noexcept { return dt_; }
  double t_max() const noexcept { return t_max_; }
  std::size_t samples() const noexcept { return samples_; }
  double time(std::size_t k) const noexcept { return static_cast<double>(k) * dt_; }

 private:
  double dt_;
  double t_max_;
  std::size_t samples_;
};

/// R_C and R_S sampled on the coarse (per-coefficient-bin) time axis.
struct TemporalWeights {
  std::vector<double> time_bins;
  std::vector<double> rc;
  std::vector<double> rs;

  std::size_t size() const noexcept { return time_bins.size(); }
};

/// Fine-grid samples of every temporal quantity of the filter.
struct TemporalProfile {
  std::vector<double> center;       // T(t)
  std::vector<double> surround;     // (T * E_tau_S)(t)
  std::vector<double> rc;           // running integral of T
  std::vector<double> rs;           // running integral of the surround kernel
};

/// Gamma kernel t^n exp(-t/tau) / tau^(n+1) for t >= 0, exactly 0 for t < 0.
double eval_gamma(double t, double tau, unsigned n);

/// Causal trapezoidal convolution on a uniform grid:
///   y[k] = dt * (sum_{i=0..k} a[i] b[k-i] - (a[0] b[k] + a[k] b[0]) / 2).
/// Summation order is fixed (i ascending) so results are bit-stable.
std::vector<double> causal_convolve(std::span<const double> a, std::span<const double> b, double dt);

/// Running trapezoidal integral; out[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> x, double dt);

/// Center kernel T = E_{tau_G,n} - w_C (E_{tau_G,n} * E_{tau_C}). The Dirac
/// term is applied as the convolution identity, not as a sampled spike.
/// Throws PrecisionError when dt exceeds a tenth of the smallest time constant.
std::vector<double> eval_center_T(const RetinaParams& params, const FineTimeGrid& grid);

/// Delayed surround kernel (T * E_{tau_S}) on the same grid as `center`.
std::vector<double> eval_surround_temporal(std::span<const double> center, const RetinaParams& params,
                                           const FineTimeGrid& grid);

/// Cumulative integrals of T and of the surround kernel, evaluated at
/// `time_bins` by linear interpolation between fine-grid cumulative values.
TemporalWeights integrate_weights(std::span<const double> center, std::span<const double> surround,
                                  const FineTimeGrid& grid, std::span<const double> time_bins);

/// Center, surround and both running integrals in one pass.
TemporalProfile temporal_profile(const RetinaParams& params, const FineTimeGrid& grid);

/// Common limit n! (1 - w_C) of R_C and R_S.
double asymptotic_weight(const RetinaParams& params);

/// Smallest grid time t with max(|R_C(t) - L|, |R_S(t) - L|) <= eps |L|.
/// Throws NotConvergedError (carrying the relative residual at the horizon)
/// when no grid time satisfies the predicate.
double convergence_time(const RetinaParams& params, const FineTimeGrid& grid, double eps);
double convergence_time(const TemporalProfile& profile, const RetinaParams& params, const FineTimeGrid& grid,
                        double eps);

/// m bins uniformly spaced on (0, horizon]: t_j = j * horizon / m.
std::vector<double> uniform_time_bins(double horizon, std::size_t m);

/// CSV with columns time_s,T,TS,RC,RS, 12 significant digits, one row per fine-grid sample.
void write_temporal_csv(std::ostream& out, const TemporalProfile& profile, const FineTimeGrid& grid);

}  // namespace nonspam
